#include "drec/pipeline.hpp"

#include <sstream>

#include "drec/errors.hpp"
#include "drec/rng.hpp"

namespace drec {

MetricsReport evaluate_state(const EmbeddingState& state,
                             const DatasetSplit& split, int layers,
                             std::span<const int> ks,
                             const std::string& protocol, int n,
                             std::uint64_t seed) {
  InteractionGraph graph =
      build_interaction_graph(split.train, split.user_count, split.item_count);
  auto [p_user, p_item] =
      propagate_bipartite(state.user_emb, state.item_emb, graph, layers);
  if (protocol == "all_ranking" || protocol == "all-ranking")
    return evaluate_all_ranking(p_user, p_item, split, ks);
  if (protocol == "real_plus_n" || protocol == "real-plus-n")
    return real_plus_n(p_user, p_item, split, n, ks, seed);
  throw ConfigError("unknown protocol '" + protocol + "'");
}

std::vector<RobustnessRow> robustness_report(
    const std::vector<std::pair<std::string, TrainConfig>>& configs,
    const DatasetSplit& clean_split, std::span<const double> noise_ratios,
    int k) {
  std::vector<RobustnessRow> rows;
  if (noise_ratios.empty()) return rows;
  std::vector<int> ks{k};
  for (const auto& [name, cfg] : configs) {
    double baseline_recall = 0.0;
    double baseline_ndcg = 0.0;
    {
      Trainer trainer(cfg, clean_split);
      auto result = trainer.train();
      auto report =
          evaluate_state(result.best_state, clean_split, cfg.layers, ks);
      baseline_recall = report.recall_at(k);
      baseline_ndcg = report.ndcg_at(k);
    }
    for (double ratio : noise_ratios) {
      RobustnessRow row;
      row.config_name = name;
      row.noise_ratio = ratio;
      row.k = k;
      if (ratio == 0.0) {
        row.recall = baseline_recall;
        row.ndcg = baseline_ndcg;
      } else {
        DatasetSplit noisy = inject_interaction_noise(
            clean_split, ratio, mix64(cfg.seed, 0x6e6f697365ULL));
        Trainer trainer(cfg, noisy);
        auto result = trainer.train();
        auto report =
            evaluate_state(result.best_state, noisy, cfg.layers, ks);
        row.recall = report.recall_at(k);
        row.ndcg = report.ndcg_at(k);
      }
      row.recall_retention =
          baseline_recall == 0.0 ? 0.0 : row.recall / baseline_recall;
      row.ndcg_retention =
          baseline_ndcg == 0.0 ? 0.0 : row.ndcg / baseline_ndcg;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string robustness_to_tsv(const std::vector<RobustnessRow>& rows) {
  std::ostringstream out;
  out << "#config\tnoise_ratio\tk\trecall\tndcg\trecall_retention\t"
         "ndcg_retention\n";
  for (const auto& r : rows)
    out << r.config_name << '\t' << r.noise_ratio << '\t' << r.k << '\t'
        << r.recall << '\t' << r.ndcg << '\t' << r.recall_retention << '\t'
        << r.ndcg_retention << '\n';
  return out.str();
}

}  // namespace drec
