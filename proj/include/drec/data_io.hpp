#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace drec {

// Edge lists in external (file) id space, deduplicated. Social edges are
// symmetrized and stored canonically with u < v; self-loops are dropped.
struct RawDataset {
  std::vector<std::pair<long, long>> interactions;
  std::vector<std::pair<long, long>> social_edges;
};

// external <-> internal id bijection
struct IdMap {
  std::vector<long> to_external;
  std::unordered_map<long, int> to_internal;

  int size() const { return static_cast<int>(to_external.size()); }
  int intern(long external_id);  // assigns the next internal id if unseen
  int lookup(long external_id) const;  // -1 if unseen
};

struct DatasetSplit {
  std::vector<std::pair<int, int>> train;  // internal (user, item)
  std::vector<std::pair<int, int>> test;
  std::vector<std::pair<int, int>> social;           // internal (u, v), u < v
  std::vector<std::uint8_t> train_flags;             // 1 = fabricated edge
  int user_count = 0;
  int item_count = 0;
  IdMap users;
  IdMap items;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  double noise_ratio = 0.0;
  std::uint64_t noise_seed = 0;

  std::size_t fabricated_count() const;
};

// One "u v [extra...]" pair per nonempty line; '#' lines are comments.
// Throws DataError on malformed lines (with line number) or empty files.
RawDataset load_edge_lists(const std::string& interaction_path,
                           const std::string& social_path);

// Per-user stratified random split. Every user keeps at least one training
// edge; deterministic for a fixed seed.
DatasetSplit split_train_test(const RawDataset& raw, double ratio,
                              std::uint64_t seed);

// Adds floor(ratio * |train|) fabricated user-item pairs, sampled uniformly
// from pairs absent from train and test, to the training set. Fabricated
// edges are flagged so later removal can be audited.
DatasetSplit inject_interaction_noise(const DatasetSplit& split, double ratio,
                                      std::uint64_t seed);

// Split persistence: train.txt / test.txt / social.txt edge lists plus
// meta.txt (M, N, ratio, seed, noise bookkeeping). Train lines carry the
// fabricated flag as a third column; the loader ignores extra columns.
void save_split(const DatasetSplit& split, const std::string& dir);
DatasetSplit load_split(const std::string& dir);

}  // namespace drec
