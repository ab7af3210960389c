#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drec/data_io.hpp"
#include "drec/graph.hpp"
#include "drec/mat.hpp"

namespace drec {

struct MetricsReport {
  std::string protocol;    // "all_ranking" or "real_plus_n"
  std::vector<int> ks;
  std::vector<double> recall;  // parallel to ks
  std::vector<double> ndcg;
  std::size_t users_evaluated = 0;
  int candidates_n = 0;        // real-plus-n sample size
  std::uint64_t seed = 0;      // real-plus-n sampling seed

  std::string to_tsv() const;
  std::string to_key_value_block() const;
  std::string to_json_lines() const;  // one record per (protocol, K, metric)
  double recall_at(int k) const;
  double ndcg_at(int k) const;
};

// Top-K item ids for each requested user: scores every item by inner
// product, masks the user's training items, breaks score ties by ascending
// item id. Users are evaluated in the given order.
std::vector<std::vector<int>> rank_all(const Mat& p_user, const Mat& p_item,
                                       const InteractionGraph& train_graph,
                                       std::span<const int> users, int k);

// |topk cap test| / |test|; `test_items` must be sorted ascending.
double recall_at_k(std::span<const int> topk,
                   std::span<const int> test_items);

// Binary relevance, log2 discount, ideal DCG over min(|test|, K) slots.
double ndcg_at_k(std::span<const int> topk, std::span<const int> test_items);

// All-ranking protocol over every user with at least one test item.
MetricsReport evaluate_all_ranking(const Mat& p_user, const Mat& p_item,
                                   const DatasetSplit& split,
                                   std::span<const int> ks);

// Ranks each user's test positives against n sampled uninteracted items
// (excluded from both train and test).
MetricsReport real_plus_n(const Mat& p_user, const Mat& p_item,
                          const DatasetSplit& split, int n,
                          std::span<const int> ks, std::uint64_t seed);

}  // namespace drec
