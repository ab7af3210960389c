#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drec/data_io.hpp"
#include "drec/denoise.hpp"
#include "drec/graph.hpp"
#include "drec/objective.hpp"
#include "drec/perturb.hpp"

namespace drec {

enum class Ablation {
  kFull,
  kNoInteractionDenoise,  // rd: skip the interaction-graph denoising pass
  kNoStructureDenoise,    // sd: skip both structure denoising passes
  kNoEmbeddingDenoise,    // ed: no perturbation, contrastive weights zero
};

const char* ablation_name(Ablation a);
Ablation parse_ablation(const std::string& name);  // throws ConfigError

struct TrainConfig {
  DenoiseThresholds thresholds;
  LossWeights weights;
  double epsilon = 0.1;  // perturbation magnitude
  int layers = 2;
  int dim = 50;
  int batch_size = 2048;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int max_epochs = 500;
  int patience = 10;       // 0 disables validation and early stopping
  double val_fraction = 0.05;
  std::uint64_t seed = 42;
  Ablation ablation = Ablation::kFull;
  PerturbMode perturb_mode = PerturbMode::kCollaborative;
  ClLoss cl_loss = ClLoss::kAnchored;

  void validate() const;  // throws ConfigError on out-of-range values
};

struct OptimizerState {
  Mat m_user, v_user;
  Mat m_item, v_item;
  long step = 0;
};

// Xavier-uniform tables (fan_in = fan_out = d, bound sqrt(3/d)) and zeroed
// moments; deterministic for a fixed seed.
std::pair<EmbeddingState, OptimizerState> initialize(const TrainConfig& cfg,
                                                     int user_count,
                                                     int item_count);

// Bias-corrected Adam over both tables.
void adam_step(EmbeddingState& state, const Mat& d_user, const Mat& d_item,
               OptimizerState& opt, const TrainConfig& cfg);

struct EpochStats {
  int epoch = 0;
  double bpr = 0.0;
  double cl_interaction = 0.0;
  double cl_social = 0.0;
  double cl_item = 0.0;
  DenoiseReport report;
  double val_recall20 = 0.0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  EmbeddingState best_state;
  int best_epoch = -1;
  double best_val_recall20 = 0.0;
  std::vector<EpochStats> log;
};

// epoch<TAB>bpr<TAB>cl_r<TAB>cl_s<TAB>cl_i<TAB>social_removed<TAB>
// interaction_removed<TAB>val_recall20<TAB>wall_seconds
std::string log_line(const EpochStats& s, bool include_wall = true);
std::string log_to_tsv(const std::vector<EpochStats>& log,
                       bool include_wall = true);

// Drives the per-epoch cycle: detached propagation on the previous epoch's
// denoised interaction graph, structure denoising from the ORIGINAL graphs,
// then batched joint-loss optimization on the denoised graphs.
class Trainer {
 public:
  Trainer(TrainConfig cfg, const DatasetSplit& split);

  EpochStats run_epoch();
  TrainResult train();  // runs up to max_epochs with early stopping

  const TrainConfig& config() const { return cfg_; }
  const EmbeddingState& state() const { return state_; }
  EmbeddingState& mutable_state() { return state_; }
  int epoch() const { return epoch_; }

  const InteractionGraph& original_interaction() const { return original_graph_; }
  const SocialNetwork& original_social() const { return original_social_; }
  const InteractionGraph& denoised_interaction() const { return denoised_graph_; }
  const SocialNetwork& denoised_social() const { return denoised_social_; }
  const EdgeMask& last_interaction_mask() const { return last_interaction_mask_; }
  const EdgeMask& last_social_mask() const { return last_social_mask_; }

  double validation_recall20() const;

  // Full optimizer/trainer state for exact resumption.
  void save_state(const std::string& path) const;
  void load_state(const std::string& path);

 private:
  BatchSample make_batch(std::span<const std::pair<int, int>> edges,
                         std::mt19937_64& neg_rng) const;
  PerturbationNoise make_noise(const ForwardPass& fwd,
                               std::uint64_t batch_index) const;

  TrainConfig cfg_;
  int user_count_ = 0;
  int item_count_ = 0;

  InteractionGraph original_graph_;     // training edges minus validation
  SocialNetwork original_social_;
  std::vector<std::uint8_t> edge_flags_;  // aligned with original_graph_
  std::vector<std::pair<int, int>> val_edges_;

  InteractionGraph denoised_graph_;
  SocialNetwork denoised_social_;
  InteractionGraph prev_denoised_graph_;  // h-pass graph for the next epoch
  EdgeMask last_interaction_mask_;
  EdgeMask last_social_mask_;

  EmbeddingState state_;
  OptimizerState opt_;
  int epoch_ = 0;

  // best-validation snapshot for early stopping / resumption
  EmbeddingState best_state_;
  int best_epoch_ = -1;
  double best_val_ = 0.0;
  int epochs_since_improvement_ = 0;
};

}  // namespace drec
