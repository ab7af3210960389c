#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "drec/evaluator.hpp"
#include "drec/trainer.hpp"

namespace drec {

// Propagates the checkpoint over the split's full training graph and runs
// the requested protocol. Evaluation depends only on (state, split), so a
// persisted checkpoint plus split artifacts reproduce a report exactly.
MetricsReport evaluate_state(const EmbeddingState& state,
                             const DatasetSplit& split, int layers,
                             std::span<const int> ks,
                             const std::string& protocol = "all_ranking",
                             int n = 100, std::uint64_t seed = 0);

struct RobustnessRow {
  std::string config_name;
  double noise_ratio = 0.0;
  int k = 0;
  double recall = 0.0;
  double ndcg = 0.0;
  double recall_retention = 0.0;  // recall(ratio) / recall(0)
  double ndcg_retention = 0.0;
};

// Trains and evaluates every config at every noise ratio (plus the clean
// baseline) and reports relative metric retention. An empty ratio list
// yields an empty table.
std::vector<RobustnessRow> robustness_report(
    const std::vector<std::pair<std::string, TrainConfig>>& configs,
    const DatasetSplit& clean_split, std::span<const double> noise_ratios,
    int k);

std::string robustness_to_tsv(const std::vector<RobustnessRow>& rows);

}  // namespace drec
