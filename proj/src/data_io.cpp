#include "drec/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "drec/errors.hpp"
#include "drec/rng.hpp"

namespace drec {

int IdMap::intern(long external_id) {
  auto it = to_internal.find(external_id);
  if (it != to_internal.end()) return it->second;
  int id = static_cast<int>(to_external.size());
  to_external.push_back(external_id);
  to_internal.emplace(external_id, id);
  return id;
}

int IdMap::lookup(long external_id) const {
  auto it = to_internal.find(external_id);
  return it == to_internal.end() ? -1 : it->second;
}

std::size_t DatasetSplit::fabricated_count() const {
  std::size_t n = 0;
  for (auto f : train_flags) n += f;
  return n;
}

namespace {

std::vector<std::pair<long, long>> parse_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::pair<long, long>> pairs;
  std::string line;
  std::size_t line_no = 0;
  std::size_t data_lines = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    ++data_lines;
    std::istringstream ss(line);
    long a, b;
    if (!(ss >> a >> b)) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected two integer tokens");
    }
    // trailing columns (ratings, timestamps) are ignored
    pairs.emplace_back(a, b);
  }
  if (data_lines == 0) throw DataError(path + ": empty dataset");
  return pairs;
}

}  // namespace

RawDataset load_edge_lists(const std::string& interaction_path,
                           const std::string& social_path) {
  RawDataset raw;
  raw.interactions = parse_pair_file(interaction_path);
  std::sort(raw.interactions.begin(), raw.interactions.end());
  raw.interactions.erase(
      std::unique(raw.interactions.begin(), raw.interactions.end()),
      raw.interactions.end());

  auto social = parse_pair_file(social_path);
  for (auto& [u, v] : social) {
    if (u > v) std::swap(u, v);
  }
  std::sort(social.begin(), social.end());
  social.erase(std::unique(social.begin(), social.end()), social.end());
  for (const auto& [u, v] : social) {
    if (u != v) raw.social_edges.emplace_back(u, v);
  }
  return raw;
}

DatasetSplit split_train_test(const RawDataset& raw, double ratio,
                              std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw ConfigError("split ratio must lie in (0, 1)");

  DatasetSplit split;
  split.ratio = ratio;
  split.seed = seed;

  // Internal ids in order of first appearance: interactions first, then
  // social-only users.
  std::vector<std::pair<int, int>> interactions;
  interactions.reserve(raw.interactions.size());
  for (const auto& [ue, ie] : raw.interactions) {
    interactions.emplace_back(split.users.intern(ue), split.items.intern(ie));
  }
  for (const auto& [ae, be] : raw.social_edges) {
    int a = split.users.intern(ae);
    int b = split.users.intern(be);
    if (a > b) std::swap(a, b);
    split.social.emplace_back(a, b);
  }
  std::sort(split.social.begin(), split.social.end());
  split.user_count = split.users.size();
  split.item_count = split.items.size();

  std::vector<std::vector<int>> per_user(split.user_count);
  for (const auto& [u, i] : interactions) per_user[u].push_back(i);

  auto rng = make_rng(seed, RngStream::kSplit);
  for (int u = 0; u < split.user_count; ++u) {
    auto& items = per_user[u];
    if (items.empty()) continue;
    std::sort(items.begin(), items.end());
    std::shuffle(items.begin(), items.end(), rng);
    long k = static_cast<long>(items.size());
    long n_train = std::llround(static_cast<double>(k) * ratio);
    n_train = std::clamp(n_train, 1L, k);  // every user keeps a training edge
    for (long j = 0; j < k; ++j) {
      if (j < n_train)
        split.train.emplace_back(u, items[j]);
      else
        split.test.emplace_back(u, items[j]);
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  split.train_flags.assign(split.train.size(), 0);
  return split;
}

DatasetSplit inject_interaction_noise(const DatasetSplit& split, double ratio,
                                      std::uint64_t seed) {
  if (ratio < 0.0 || ratio >= 1.0)
    throw ConfigError("noise ratio must lie in [0, 1)");
  DatasetSplit out = split;
  out.noise_ratio = ratio;
  out.noise_seed = seed;
  std::size_t target =
      static_cast<std::size_t>(ratio * static_cast<double>(split.train.size()));
  if (target == 0) return out;

  std::set<std::pair<int, int>> observed(split.train.begin(),
                                         split.train.end());
  observed.insert(split.test.begin(), split.test.end());

  auto rng = make_rng(seed, RngStream::kNoiseInjection);
  std::uniform_int_distribution<int> user_dist(0, split.user_count - 1);
  std::uniform_int_distribution<int> item_dist(0, split.item_count - 1);

  std::size_t added = 0;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 1000 * (target + 1);
  while (added < target && attempts < max_attempts) {
    ++attempts;
    std::pair<int, int> e{user_dist(rng), item_dist(rng)};
    if (observed.count(e)) continue;
    observed.insert(e);
    out.train.push_back(e);
    out.train_flags.push_back(1);
    ++added;
  }
  if (added < target)
    throw DataError("noise injection could not find enough unobserved pairs");
  return out;
}

void save_split(const DatasetSplit& split, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  auto write_edges = [](const std::string& path,
                        const std::vector<std::pair<int, int>>& edges,
                        const std::vector<std::uint8_t>* flags) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      out << edges[k].first << ' ' << edges[k].second;
      if (flags) out << ' ' << int((*flags)[k]);
      out << '\n';
    }
  };
  write_edges(dir + "/train.txt", split.train, &split.train_flags);
  write_edges(dir + "/test.txt", split.test, nullptr);
  write_edges(dir + "/social.txt", split.social, nullptr);

  std::ofstream meta(dir + "/meta.txt");
  if (!meta) throw DataError("cannot write " + dir + "/meta.txt");
  meta << "user_count = " << split.user_count << '\n'
       << "item_count = " << split.item_count << '\n'
       << "ratio = " << split.ratio << '\n'
       << "seed = " << split.seed << '\n'
       << "noise_ratio = " << split.noise_ratio << '\n'
       << "noise_seed = " << split.noise_seed << '\n';
}

DatasetSplit load_split(const std::string& dir) {
  DatasetSplit split;

  std::ifstream meta(dir + "/meta.txt");
  if (!meta) throw DataError("cannot open " + dir + "/meta.txt");
  std::string key, eq;
  while (meta >> key >> eq) {
    if (key == "user_count")
      meta >> split.user_count;
    else if (key == "item_count")
      meta >> split.item_count;
    else if (key == "ratio")
      meta >> split.ratio;
    else if (key == "seed")
      meta >> split.seed;
    else if (key == "noise_ratio")
      meta >> split.noise_ratio;
    else if (key == "noise_seed")
      meta >> split.noise_seed;
    else {
      std::string skip;
      meta >> skip;
    }
  }

  auto read_edges = [&](const std::string& path, bool with_flags,
                        std::vector<std::pair<int, int>>& edges,
                        std::vector<std::uint8_t>* flags) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      std::istringstream ss(line);
      int a, b;
      if (!(ss >> a >> b))
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": expected two integer tokens");
      edges.emplace_back(a, b);
      if (with_flags && flags) {
        int f = 0;
        ss >> f;
        flags->push_back(f ? 1 : 0);
      }
      if (a < 0 || b < 0)
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": negative internal id");
    }
  };
  read_edges(dir + "/train.txt", true, split.train, &split.train_flags);
  read_edges(dir + "/test.txt", false, split.test, nullptr);
  read_edges(dir + "/social.txt", false, split.social, nullptr);

  // Internal ids are the artifact space; the bijection is the identity over
  // the persisted range.
  for (int u = 0; u < split.user_count; ++u) split.users.intern(u);
  for (int i = 0; i < split.item_count; ++i) split.items.intern(i);
  return split;
}

}  // namespace drec
