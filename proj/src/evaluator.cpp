#include "drec/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "drec/errors.hpp"
#include "drec/objective.hpp"
#include "drec/rng.hpp"

namespace drec {

namespace {

// score-descending, id-ascending
struct Ranked {
  double score;
  int item;
  bool operator<(const Ranked& o) const {
    if (score != o.score) return score > o.score;
    return item < o.item;
  }
};

std::vector<std::vector<int>> group_by_user(
    const std::vector<std::pair<int, int>>& edges, int user_count) {
  std::vector<std::vector<int>> per_user(user_count);
  for (const auto& [u, i] : edges) per_user[u].push_back(i);
  for (auto& items : per_user) std::sort(items.begin(), items.end());
  return per_user;
}

double dcg_weight(std::size_t rank) {  // rank is 0-based
  return 1.0 / std::log2(static_cast<double>(rank) + 2.0);
}

}  // namespace

std::string MetricsReport::to_tsv() const {
  std::ostringstream out;
  out << "protocol\tk\trecall\tndcg\n";
  for (std::size_t i = 0; i < ks.size(); ++i)
    out << protocol << '\t' << ks[i] << '\t' << recall[i] << '\t' << ndcg[i]
        << '\n';
  return out.str();
}

std::string MetricsReport::to_key_value_block() const {
  std::ostringstream out;
  out << "protocol=" << protocol << '\n'
      << "users_evaluated=" << users_evaluated << '\n';
  if (protocol == "real_plus_n")
    out << "n=" << candidates_n << '\n' << "seed=" << seed << '\n';
  for (std::size_t i = 0; i < ks.size(); ++i) {
    out << "recall@" << ks[i] << '=' << recall[i] << '\n';
    out << "ndcg@" << ks[i] << '=' << ndcg[i] << '\n';
  }
  return out.str();
}

std::string MetricsReport::to_json_lines() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    out << "{\"protocol\":\"" << protocol << "\",\"k\":" << ks[i]
        << ",\"metric\":\"recall\",\"value\":" << recall[i] << "}\n";
    out << "{\"protocol\":\"" << protocol << "\",\"k\":" << ks[i]
        << ",\"metric\":\"ndcg\",\"value\":" << ndcg[i] << "}\n";
  }
  return out.str();
}

double MetricsReport::recall_at(int k) const {
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (ks[i] == k) return recall[i];
  throw UsageError("recall for unrequested k");
}

double MetricsReport::ndcg_at(int k) const {
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (ks[i] == k) return ndcg[i];
  throw UsageError("ndcg for unrequested k");
}

std::vector<std::vector<int>> rank_all(const Mat& p_user, const Mat& p_item,
                                       const InteractionGraph& train_graph,
                                       std::span<const int> users, int k) {
  const int item_count = static_cast<int>(p_item.rows());
  std::vector<std::vector<int>> result;
  result.reserve(users.size());
  std::vector<Ranked> candidates;
  for (int u : users) {
    candidates.clear();
    auto train_items = train_graph.items_of(u);
    auto pu = p_user.row(u);
    for (int i = 0; i < item_count; ++i) {
      if (std::binary_search(train_items.begin(), train_items.end(), i))
        continue;
      candidates.push_back({dot(pu, p_item.row(i)), i});
    }
    std::size_t top = std::min<std::size_t>(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + top,
                      candidates.end());
    std::vector<int> ids(top);
    for (std::size_t r = 0; r < top; ++r) ids[r] = candidates[r].item;
    result.push_back(std::move(ids));
  }
  return result;
}

double recall_at_k(std::span<const int> topk,
                   std::span<const int> test_items) {
  if (test_items.empty()) return 0.0;
  std::size_t hits = 0;
  for (int item : topk)
    if (std::binary_search(test_items.begin(), test_items.end(), item))
      ++hits;
  return static_cast<double>(hits) / static_cast<double>(test_items.size());
}

double ndcg_at_k(std::span<const int> topk, std::span<const int> test_items) {
  if (test_items.empty()) return 0.0;
  double dcg = 0.0;
  for (std::size_t r = 0; r < topk.size(); ++r)
    if (std::binary_search(test_items.begin(), test_items.end(), topk[r]))
      dcg += dcg_weight(r);
  // ideal DCG over min(|test|, K) slots; K is the list length handed in
  std::size_t ideal = std::min(test_items.size(), topk.size());
  double idcg = 0.0;
  for (std::size_t r = 0; r < ideal; ++r) idcg += dcg_weight(r);
  return idcg == 0.0 ? 0.0 : dcg / idcg;
}

MetricsReport evaluate_all_ranking(const Mat& p_user, const Mat& p_item,
                                   const DatasetSplit& split,
                                   std::span<const int> ks) {
  auto test_by_user = group_by_user(split.test, split.user_count);
  InteractionGraph train_graph = build_interaction_graph(
      split.train, split.user_count, split.item_count);

  std::vector<int> users;
  for (int u = 0; u < split.user_count; ++u)
    if (!test_by_user[u].empty()) users.push_back(u);

  int max_k = 0;
  for (int k : ks) max_k = std::max(max_k, k);
  auto topk = rank_all(p_user, p_item, train_graph, users, max_k);

  MetricsReport report;
  report.protocol = "all_ranking";
  report.ks.assign(ks.begin(), ks.end());
  report.users_evaluated = users.size();
  for (int k : ks) {
    double rec = 0.0, nd = 0.0;
    for (std::size_t idx = 0; idx < users.size(); ++idx) {
      std::span<const int> list(topk[idx].data(),
                                std::min<std::size_t>(k, topk[idx].size()));
      const auto& truth = test_by_user[users[idx]];
      rec += recall_at_k(list, truth);
      nd += ndcg_at_k(list, truth);
    }
    double denom = users.empty() ? 1.0 : static_cast<double>(users.size());
    report.recall.push_back(rec / denom);
    report.ndcg.push_back(nd / denom);
  }
  return report;
}

MetricsReport real_plus_n(const Mat& p_user, const Mat& p_item,
                          const DatasetSplit& split, int n,
                          std::span<const int> ks, std::uint64_t seed) {
  auto test_by_user = group_by_user(split.test, split.user_count);
  auto train_by_user = group_by_user(split.train, split.user_count);

  auto rng = make_rng(seed, RngStream::kRealPlusN);
  std::uniform_int_distribution<int> item_dist(0, split.item_count - 1);

  MetricsReport report;
  report.protocol = "real_plus_n";
  report.ks.assign(ks.begin(), ks.end());
  report.candidates_n = n;
  report.seed = seed;
  std::vector<double> rec(ks.size(), 0.0), nd(ks.size(), 0.0);

  for (int u = 0; u < split.user_count; ++u) {
    const auto& truth = test_by_user[u];
    if (truth.empty()) continue;
    ++report.users_evaluated;

    const auto& train_items = train_by_user[u];
    std::set<int> candidate_set(truth.begin(), truth.end());
    std::size_t interacted = train_items.size() + truth.size();
    std::size_t pool =
        static_cast<std::size_t>(split.item_count) - interacted;
    std::size_t want = std::min<std::size_t>(n, pool);
    std::size_t guard = 0;
    while (candidate_set.size() < truth.size() + want &&
           guard < 10000ull * (want + 1)) {
      ++guard;
      int cand = item_dist(rng);
      if (std::binary_search(train_items.begin(), train_items.end(), cand))
        continue;
      candidate_set.insert(cand);  // test items are already present
    }

    std::vector<Ranked> ranked;
    ranked.reserve(candidate_set.size());
    auto pu = p_user.row(u);
    for (int i : candidate_set) ranked.push_back({dot(pu, p_item.row(i)), i});
    std::sort(ranked.begin(), ranked.end());

    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      std::size_t top = std::min<std::size_t>(ks[ki], ranked.size());
      std::vector<int> list(top);
      for (std::size_t r = 0; r < top; ++r) list[r] = ranked[r].item;
      rec[ki] += recall_at_k(list, truth);
      nd[ki] += ndcg_at_k(list, truth);
    }
  }

  double denom = report.users_evaluated == 0
                     ? 1.0
                     : static_cast<double>(report.users_evaluated);
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    report.recall.push_back(rec[ki] / denom);
    report.ndcg.push_back(nd[ki] / denom);
  }
  return report;
}

}  // namespace drec
