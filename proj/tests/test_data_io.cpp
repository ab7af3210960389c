#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>

#include "drec/data_io.hpp"
#include "drec/errors.hpp"
#include "test_support.hpp"

using namespace drec;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

RawDataset tiny_raw() {
  RawDataset raw;
  for (int u = 0; u < 6; ++u)
    for (int i = 0; i < 10; ++i)
      raw.interactions.emplace_back(u, i);
  raw.social_edges = {{0, 1}, {1, 2}, {3, 4}};
  return raw;
}

}  // namespace

TEST_CASE("loader deduplicates exact duplicates") {
  testsup::TempDir dir("dataio");
  write_file(dir.str() + "/inter.txt", "1 7\n1 7\n2 9\n");
  write_file(dir.str() + "/social.txt", "1 2\n");
  auto raw = load_edge_lists(dir.str() + "/inter.txt", dir.str() + "/social.txt");
  CHECK(raw.interactions.size() == 2);
}

TEST_CASE("loader drops social self-loops") {
  testsup::TempDir dir("dataio");
  write_file(dir.str() + "/inter.txt", "1 7\n");
  write_file(dir.str() + "/social.txt", "3 3\n");
  auto raw = load_edge_lists(dir.str() + "/inter.txt", dir.str() + "/social.txt");
  CHECK(raw.social_edges.empty());
}

TEST_CASE("loader symmetrizes social edges to canonical order") {
  testsup::TempDir dir("dataio");
  write_file(dir.str() + "/inter.txt", "1 7\n");
  write_file(dir.str() + "/social.txt", "5 2\n2 5\n");
  auto raw = load_edge_lists(dir.str() + "/inter.txt", dir.str() + "/social.txt");
  REQUIRE(raw.social_edges.size() == 1);
  CHECK(raw.social_edges[0] == std::pair<long, long>{2, 5});
}

TEST_CASE("loader skips comments and ignores extra columns") {
  testsup::TempDir dir("dataio");
  write_file(dir.str() + "/inter.txt", "# header\n1 7 5.0 123456\n\n2 9 3.0\n");
  write_file(dir.str() + "/social.txt", "1 2\n");
  auto raw = load_edge_lists(dir.str() + "/inter.txt", dir.str() + "/social.txt");
  CHECK(raw.interactions.size() == 2);
}

TEST_CASE("loader reports malformed line with its number") {
  testsup::TempDir dir("dataio");
  write_file(dir.str() + "/inter.txt", "1 7\nbroken-line\n");
  write_file(dir.str() + "/social.txt", "1 2\n");
  try {
    load_edge_lists(dir.str() + "/inter.txt", dir.str() + "/social.txt");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
}

TEST_CASE("loader rejects empty files") {
  testsup::TempDir dir("dataio");
  write_file(dir.str() + "/inter.txt", "# only a comment\n");
  write_file(dir.str() + "/social.txt", "1 2\n");
  CHECK_THROWS_AS(
      load_edge_lists(dir.str() + "/inter.txt", dir.str() + "/social.txt"),
      DataError);
}

TEST_CASE("split is exact for divisible users and keeps degenerate users") {
  RawDataset raw;
  for (int i = 0; i < 10; ++i) raw.interactions.emplace_back(100, i);
  raw.interactions.emplace_back(200, 3);  // single-interaction user
  raw.social_edges = {{100, 200}};
  auto split = split_train_test(raw, 0.8, 7);

  int train_100 = 0, test_100 = 0, train_200 = 0, test_200 = 0;
  int u100 = split.users.lookup(100), u200 = split.users.lookup(200);
  for (auto& [u, i] : split.train) {
    if (u == u100) ++train_100;
    if (u == u200) ++train_200;
  }
  for (auto& [u, i] : split.test) {
    if (u == u100) ++test_100;
    if (u == u200) ++test_200;
  }
  CHECK(train_100 == 8);
  CHECK(test_100 == 2);
  CHECK(train_200 == 1);
  CHECK(test_200 == 0);
}

TEST_CASE("split is deterministic and disjoint") {
  auto raw = tiny_raw();
  auto a = split_train_test(raw, 0.8, 42);
  auto b = split_train_test(raw, 0.8, 42);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);

  std::set<std::pair<int, int>> train_set(a.train.begin(), a.train.end());
  for (auto& e : a.test) CHECK(train_set.count(e) == 0);

  auto c = split_train_test(raw, 0.8, 43);
  CHECK(a.train != c.train);
}

TEST_CASE("split rejects out-of-range ratio") {
  CHECK_THROWS_AS(split_train_test(tiny_raw(), 0.0, 1), ConfigError);
  CHECK_THROWS_AS(split_train_test(tiny_raw(), 1.0, 1), ConfigError);
}

TEST_CASE("id remapping round-trips") {
  auto raw = tiny_raw();
  auto split = split_train_test(raw, 0.8, 5);
  for (long ext = 0; ext < 6; ++ext) {
    int internal = split.users.lookup(ext);
    REQUIRE(internal >= 0);
    CHECK(split.users.to_external[internal] == ext);
  }
  for (long ext = 0; ext < 10; ++ext) {
    int internal = split.items.lookup(ext);
    REQUIRE(internal >= 0);
    CHECK(split.items.to_external[internal] == ext);
  }
}

TEST_CASE("noise injection at ratio zero is the identity") {
  auto split = split_train_test(tiny_raw(), 0.8, 11);
  auto noisy = inject_interaction_noise(split, 0.0, 9);
  CHECK(noisy.train == split.train);
  CHECK(noisy.fabricated_count() == 0);
}

TEST_CASE("noise injection adds the right count of unobserved flagged pairs") {
  testsup::TwoCommunityOptions opt;
  opt.users_per_side = 20;
  opt.items_per_side = 40;
  opt.interactions_per_user = 10;
  auto split = testsup::make_two_community_split(opt);
  std::size_t before = split.train.size();

  auto noisy = inject_interaction_noise(split, 0.1, 3);
  std::size_t want = static_cast<std::size_t>(0.1 * before);
  CHECK(noisy.train.size() == before + want);
  CHECK(noisy.fabricated_count() == want);

  std::set<std::pair<int, int>> original(split.train.begin(), split.train.end());
  original.insert(split.test.begin(), split.test.end());
  std::set<std::pair<int, int>> all_new;
  for (std::size_t e = 0; e < noisy.train.size(); ++e) {
    if (!noisy.train_flags[e]) continue;
    CHECK(original.count(noisy.train[e]) == 0);
    all_new.insert(noisy.train[e]);
  }
  CHECK(all_new.size() == want);  // no duplicate fabrications

  // flags partition the training set
  std::size_t clean = 0;
  for (auto f : noisy.train_flags) clean += f == 0;
  CHECK(clean + noisy.fabricated_count() == noisy.train.size());

  auto again = inject_interaction_noise(split, 0.1, 3);
  CHECK(again.train == noisy.train);
}

TEST_CASE("noise injection rejects ratio >= 1") {
  auto split = split_train_test(tiny_raw(), 0.8, 11);
  CHECK_THROWS_AS(inject_interaction_noise(split, 1.0, 1), ConfigError);
}

TEST_CASE("split artifacts round-trip through disk") {
  testsup::TwoCommunityOptions opt;
  opt.users_per_side = 10;
  opt.items_per_side = 20;
  opt.interactions_per_user = 8;
  opt.cross_interaction_noise = 0.1;
  auto split = testsup::make_two_community_split(opt);

  testsup::TempDir dir("split");
  save_split(split, dir.str());
  auto loaded = load_split(dir.str());
  CHECK(loaded.train == split.train);
  CHECK(loaded.test == split.test);
  CHECK(loaded.social == split.social);
  CHECK(loaded.train_flags == split.train_flags);
  CHECK(loaded.user_count == split.user_count);
  CHECK(loaded.item_count == split.item_count);
  CHECK(loaded.ratio == doctest::Approx(split.ratio));
}
