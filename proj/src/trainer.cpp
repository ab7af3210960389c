#include "drec/trainer.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "drec/errors.hpp"
#include "drec/evaluator.hpp"
#include "drec/rng.hpp"

namespace drec {

const char* ablation_name(Ablation a) {
  switch (a) {
    case Ablation::kFull: return "full";
    case Ablation::kNoInteractionDenoise: return "rd";
    case Ablation::kNoStructureDenoise: return "sd";
    case Ablation::kNoEmbeddingDenoise: return "ed";
  }
  return "full";
}

Ablation parse_ablation(const std::string& name) {
  if (name == "full") return Ablation::kFull;
  if (name == "rd") return Ablation::kNoInteractionDenoise;
  if (name == "sd") return Ablation::kNoStructureDenoise;
  if (name == "ed") return Ablation::kNoEmbeddingDenoise;
  throw ConfigError("unknown ablation '" + name + "'");
}

void TrainConfig::validate() const {
  if (dim <= 0) throw ConfigError("dim must be positive");
  if (layers < 0) throw ConfigError("layers must be >= 0");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (learning_rate <= 0.0) throw ConfigError("learning rate must be positive");
  if (max_epochs < 0) throw ConfigError("epochs must be >= 0");
  if (patience < 0) throw ConfigError("patience must be >= 0");
  if (epsilon < 0.0) throw ConfigError("epsilon must be >= 0");
  if (weights.temperature <= 0.0) throw ConfigError("tau must be positive");
  if (weights.reg < 0.0 || weights.cl_interaction < 0.0 ||
      weights.cl_social < 0.0 || weights.cl_item < 0.0)
    throw ConfigError("loss weights must be >= 0");
  if (thresholds.gaussian_sigma <= 0.0)
    throw ConfigError("sigma must be positive");
  if (thresholds.social < 0.0 || thresholds.social > 1.0 ||
      thresholds.interaction < 0.0 || thresholds.interaction > 1.0)
    throw ConfigError("denoise thresholds must lie in [0, 1]");
  if (val_fraction < 0.0 || val_fraction >= 1.0)
    throw ConfigError("validation fraction must lie in [0, 1)");
}

std::pair<EmbeddingState, OptimizerState> initialize(const TrainConfig& cfg,
                                                     int user_count,
                                                     int item_count) {
  cfg.validate();
  EmbeddingState state;
  state.user_emb = Mat(user_count, cfg.dim);
  state.item_emb = Mat(item_count, cfg.dim);
  double bound = std::sqrt(3.0 / static_cast<double>(cfg.dim));
  auto rng = make_rng(cfg.seed, RngStream::kInit);
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : state.user_emb.data()) v = dist(rng);
  for (double& v : state.item_emb.data()) v = dist(rng);

  OptimizerState opt;
  opt.m_user = Mat(user_count, cfg.dim);
  opt.v_user = Mat(user_count, cfg.dim);
  opt.m_item = Mat(item_count, cfg.dim);
  opt.v_item = Mat(item_count, cfg.dim);
  return {std::move(state), std::move(opt)};
}

namespace {

void adam_update_table(Mat& table, const Mat& grad, Mat& m, Mat& v, long step,
                       const TrainConfig& cfg) {
  double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
  double corr1 = 1.0 - std::pow(b1, static_cast<double>(step));
  double corr2 = 1.0 - std::pow(b2, static_cast<double>(step));
  auto& x = table.data();
  const auto& g = grad.data();
  auto& md = m.data();
  auto& vd = v.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    md[i] = b1 * md[i] + (1.0 - b1) * g[i];
    vd[i] = b2 * vd[i] + (1.0 - b2) * g[i] * g[i];
    double mh = md[i] / corr1;
    double vh = vd[i] / corr2;
    x[i] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.adam_eps);
  }
}

}  // namespace

void adam_step(EmbeddingState& state, const Mat& d_user, const Mat& d_item,
               OptimizerState& opt, const TrainConfig& cfg) {
  ++opt.step;
  adam_update_table(state.user_emb, d_user, opt.m_user, opt.v_user, opt.step,
                    cfg);
  adam_update_table(state.item_emb, d_item, opt.m_item, opt.v_item, opt.step,
                    cfg);
}

std::string log_line(const EpochStats& s, bool include_wall) {
  std::ostringstream out;
  out.precision(12);
  out << s.epoch << '\t' << s.bpr << '\t' << s.cl_interaction << '\t'
      << s.cl_social << '\t' << s.cl_item << '\t'
      << s.report.social_edges_removed << '\t'
      << s.report.interaction_edges_removed << '\t' << s.val_recall20;
  if (include_wall) out << '\t' << s.wall_seconds;
  return out.str();
}

std::string log_to_tsv(const std::vector<EpochStats>& log, bool include_wall) {
  std::ostringstream out;
  out << "#epoch\tbpr_loss\tcl_r\tcl_s\tcl_i\tsocial_removed\t"
         "interaction_removed\tval_recall@20";
  if (include_wall) out << "\twall_seconds";
  out << '\n';
  for (const auto& s : log) out << log_line(s, include_wall) << '\n';
  return out.str();
}

Trainer::Trainer(TrainConfig cfg, const DatasetSplit& split) : cfg_(cfg) {
  cfg_.validate();
  user_count_ = split.user_count;
  item_count_ = split.item_count;
  if (user_count_ <= 0 || item_count_ <= 0)
    throw DataError("split has no users or items");

  // Optional per-user validation holdout, only when early stopping is on.
  std::vector<std::pair<int, int>> train_edges = split.train;
  std::vector<std::uint8_t> flags = split.train_flags;
  if (flags.empty()) flags.assign(train_edges.size(), 0);
  if (cfg_.patience > 0 && cfg_.val_fraction > 0.0) {
    std::vector<std::vector<std::size_t>> per_user(user_count_);
    for (std::size_t e = 0; e < train_edges.size(); ++e)
      per_user[train_edges[e].first].push_back(e);
    auto rng = make_rng(cfg_.seed, RngStream::kValidationHoldout);
    std::vector<std::uint8_t> held(train_edges.size(), 0);
    for (int u = 0; u < user_count_; ++u) {
      auto& ids = per_user[u];
      if (ids.size() < 2) continue;
      // at least one held-out edge per eligible user, never the last one
      std::size_t n_val = static_cast<std::size_t>(
          std::ceil(static_cast<double>(ids.size()) * cfg_.val_fraction));
      n_val = std::min(n_val, ids.size() - 1);
      if (n_val == 0) continue;
      std::shuffle(ids.begin(), ids.end(), rng);
      for (std::size_t j = 0; j < n_val; ++j) held[ids[j]] = 1;
    }
    std::vector<std::pair<int, int>> kept;
    std::vector<std::uint8_t> kept_flags;
    for (std::size_t e = 0; e < train_edges.size(); ++e) {
      if (held[e]) {
        val_edges_.push_back(train_edges[e]);
      } else {
        kept.push_back(train_edges[e]);
        kept_flags.push_back(flags[e]);
      }
    }
    train_edges = std::move(kept);
    flags = std::move(kept_flags);
    std::sort(val_edges_.begin(), val_edges_.end());
  }

  // Canonical edge order so the flag array stays aligned with edge ids.
  std::vector<std::size_t> order(train_edges.size());
  for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return train_edges[a] < train_edges[b];
  });
  std::vector<std::pair<int, int>> sorted_edges(train_edges.size());
  edge_flags_.resize(train_edges.size());
  for (std::size_t e = 0; e < order.size(); ++e) {
    sorted_edges[e] = train_edges[order[e]];
    edge_flags_[e] = flags[order[e]];
  }

  original_graph_ =
      build_interaction_graph(std::move(sorted_edges), user_count_, item_count_);
  original_social_ = build_social_network(split.social, user_count_);

  denoised_graph_ = original_graph_;
  denoised_social_ = original_social_;
  prev_denoised_graph_ = original_graph_;
  last_interaction_mask_ = EdgeMask::all(original_graph_.edge_count());
  last_social_mask_ = EdgeMask::all(original_social_.edge_count());

  std::tie(state_, opt_) = initialize(cfg_, user_count_, item_count_);
  best_state_ = state_;
}

BatchSample Trainer::make_batch(std::span<const std::pair<int, int>> edges,
                                std::mt19937_64& neg_rng) const {
  std::vector<int> users, positives, negatives;
  users.reserve(edges.size());
  positives.reserve(edges.size());
  negatives.reserve(edges.size());
  std::uniform_int_distribution<int> item_dist(0, item_count_ - 1);
  for (const auto& [u, i] : edges) {
    int neg = -1;
    for (int attempt = 0; attempt < 200; ++attempt) {
      int cand = item_dist(neg_rng);
      if (!denoised_graph_.has_edge(u, cand)) {
        neg = cand;
        break;
      }
    }
    if (neg < 0) {
      // retry cap hit: scan for any non-interacted item
      for (int cand = 0; cand < item_count_; ++cand) {
        if (!denoised_graph_.has_edge(u, cand)) {
          neg = cand;
          break;
        }
      }
    }
    if (neg < 0) continue;  // user interacts with every item
    users.push_back(u);
    positives.push_back(i);
    negatives.push_back(neg);
  }
  return BatchSample::from_triples(std::move(users), std::move(positives),
                                   std::move(negatives));
}

PerturbationNoise Trainer::make_noise(const ForwardPass& fwd,
                                      std::uint64_t batch_index) const {
  PerturbationConfig pcfg;
  pcfg.epsilon = cfg_.epsilon;
  pcfg.mode = cfg_.perturb_mode;
  PerturbationNoise noise;
  noise.epsilon = cfg_.epsilon;
  std::uint64_t base =
      mix64(cfg_.seed, static_cast<std::uint64_t>(epoch_), batch_index);

  const Mat& p_inter = fwd.interaction.users;
  const Mat& p_item = fwd.interaction.items;
  const Mat& p_social = fwd.social.users;

  pcfg.seed = mix64(base, 1);
  auto pair_s = make_noise_pair(p_social, p_inter, pcfg);
  noise.user_social_1 = std::move(pair_s.delta1);
  noise.user_social_2 = std::move(pair_s.delta2);

  pcfg.seed = mix64(base, 2);
  auto pair_r = make_noise_pair(p_inter, p_social, pcfg);
  noise.user_interaction_1 = std::move(pair_r.delta1);
  noise.user_interaction_2 = std::move(pair_r.delta2);

  pcfg.seed = mix64(base, 3);
  auto pair_i = make_noise_pair(p_item, p_item, pcfg);
  noise.item_1 = std::move(pair_i.delta1);
  noise.item_2 = std::move(pair_i.delta2);
  return noise;
}

EpochStats Trainer::run_epoch() {
  auto t0 = std::chrono::steady_clock::now();
  EpochStats stats;
  stats.epoch = epoch_;

  // Detached preference pass on the previous epoch's denoised graph
  // (the original graph on epoch 0).
  auto [pref_users, pref_items] = propagate_bipartite(
      state_.user_emb, state_.item_emb, prev_denoised_graph_, cfg_.layers);

  bool structure = cfg_.ablation != Ablation::kNoStructureDenoise;
  bool interaction_denoise =
      structure && cfg_.ablation != Ablation::kNoInteractionDenoise;

  if (structure) {
    auto social_res =
        denoise_social(original_social_, pref_users, cfg_.thresholds);
    denoised_social_ = std::move(social_res.network);
    last_social_mask_ = std::move(social_res.mask);
    stats.report.merge(social_res.report);
  } else {
    denoised_social_ = original_social_;
    last_social_mask_ = EdgeMask::all(original_social_.edge_count());
  }

  if (interaction_denoise) {
    Mat enhanced = social_enhance(pref_users, denoised_social_);
    auto inter_res = denoise_interaction(original_graph_, enhanced, pref_items,
                                         cfg_.thresholds, edge_flags_);
    denoised_graph_ = std::move(inter_res.graph);
    last_interaction_mask_ = std::move(inter_res.mask);
    stats.report.merge(inter_res.report);
  } else {
    denoised_graph_ = original_graph_;
    last_interaction_mask_ = EdgeMask::all(original_graph_.edge_count());
  }

  if (denoised_graph_.edge_count() == 0)
    throw ConfigError(
        "denoised interaction graph is empty; thresholds are pathological");

  bool embedding_denoise = cfg_.ablation != Ablation::kNoEmbeddingDenoise;
  LossWeights weights = cfg_.weights;
  if (!embedding_denoise) {
    weights.cl_interaction = 0.0;
    weights.cl_social = 0.0;
    weights.cl_item = 0.0;
  }

  auto edges = denoised_graph_.edges;
  auto shuffle_rng = make_rng(cfg_.seed, RngStream::kBatchShuffle,
                              static_cast<std::uint64_t>(epoch_));
  std::shuffle(edges.begin(), edges.end(), shuffle_rng);
  auto neg_rng = make_rng(cfg_.seed, RngStream::kNegativeSampling,
                          static_cast<std::uint64_t>(epoch_));

  std::size_t batch_count = 0;
  for (std::size_t start = 0; start < edges.size();
       start += cfg_.batch_size, ++batch_count) {
    std::size_t len =
        std::min<std::size_t>(cfg_.batch_size, edges.size() - start);
    BatchSample batch =
        make_batch({edges.data() + start, len}, neg_rng);
    if (batch.users.empty()) continue;

    ForwardPass fwd =
        forward_pass(state_, denoised_graph_, denoised_social_, cfg_.layers);

    PerturbationNoise noise;
    const PerturbationNoise* noise_ptr = nullptr;
    if (embedding_denoise) {
      noise = make_noise(fwd, batch_count);
      noise_ptr = &noise;
    }

    JointLossResult res =
        joint_loss(state_, fwd, batch, noise_ptr, cfg_.cl_loss, weights);
    if (!std::isfinite(res.total))
      throw NumericError("non-finite loss at epoch " + std::to_string(epoch_));

    stats.bpr += res.bpr;
    stats.cl_interaction += res.cl_interaction;
    stats.cl_social += res.cl_social;
    stats.cl_item += res.cl_item;

    adam_step(state_, res.d_user, res.d_item, opt_, cfg_);
  }

  prev_denoised_graph_ = denoised_graph_;
  ++epoch_;

  if (cfg_.patience > 0) stats.val_recall20 = validation_recall20();

  auto t1 = std::chrono::steady_clock::now();
  stats.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  return stats;
}

double Trainer::validation_recall20() const {
  if (val_edges_.empty()) return 0.0;
  auto [p_user, p_item] = propagate_bipartite(
      state_.user_emb, state_.item_emb, original_graph_, cfg_.layers);

  std::vector<std::vector<int>> val_by_user(user_count_);
  for (const auto& [u, i] : val_edges_) val_by_user[u].push_back(i);
  std::vector<int> users;
  for (int u = 0; u < user_count_; ++u) {
    if (!val_by_user[u].empty()) {
      std::sort(val_by_user[u].begin(), val_by_user[u].end());
      users.push_back(u);
    }
  }
  auto topk = rank_all(p_user, p_item, original_graph_, users, 20);
  double total = 0.0;
  for (std::size_t idx = 0; idx < users.size(); ++idx)
    total += recall_at_k(topk[idx], val_by_user[users[idx]]);
  return users.empty() ? 0.0 : total / static_cast<double>(users.size());
}

TrainResult Trainer::train() {
  TrainResult result;
  bool early_stopping = cfg_.patience > 0 && !val_edges_.empty();
  for (int e = epoch_; e < cfg_.max_epochs; ++e) {
    EpochStats stats = run_epoch();
    result.log.push_back(stats);
    if (early_stopping) {
      if (best_epoch_ < 0 || stats.val_recall20 > best_val_) {
        best_val_ = stats.val_recall20;
        best_epoch_ = stats.epoch;
        best_state_ = state_;
        epochs_since_improvement_ = 0;
      } else {
        ++epochs_since_improvement_;
        if (epochs_since_improvement_ >= cfg_.patience) break;
      }
    } else {
      best_state_ = state_;
      best_epoch_ = stats.epoch;
      best_val_ = stats.val_recall20;
    }
  }
  result.best_state = best_state_;
  result.best_epoch = best_epoch_;
  result.best_val_recall20 = best_val_;
  return result;
}

namespace {

constexpr std::uint64_t kTrainerStateMagic = 0x314e525443455244ULL;  // "DRECTRN1"

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = (v >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
  return v;
}

void put_mat(std::ostream& out, const Mat& m) {
  for (double v : m.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void get_mat(std::istream& in, Mat& m) {
  for (double& v : m.data()) v = std::bit_cast<double>(get_u64(in));
}

}  // namespace

void Trainer::save_state(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write trainer state " + path);
  put_u64(out, kTrainerStateMagic);
  put_u64(out, 1);  // version
  put_u64(out, user_count_);
  put_u64(out, item_count_);
  put_u64(out, cfg_.dim);
  put_u64(out, static_cast<std::uint64_t>(epoch_));
  put_u64(out, static_cast<std::uint64_t>(opt_.step));
  put_u64(out, static_cast<std::uint64_t>(best_epoch_ + 1));
  put_u64(out, static_cast<std::uint64_t>(epochs_since_improvement_));
  put_u64(out, std::bit_cast<std::uint64_t>(best_val_));
  put_mat(out, state_.user_emb);
  put_mat(out, state_.item_emb);
  put_mat(out, opt_.m_user);
  put_mat(out, opt_.v_user);
  put_mat(out, opt_.m_item);
  put_mat(out, opt_.v_item);
  put_mat(out, best_state_.user_emb);
  put_mat(out, best_state_.item_emb);
  put_u64(out, last_interaction_mask_.size());
  for (auto k : last_interaction_mask_.keep)
    out.put(static_cast<char>(k));
  if (!out) throw DataError("short write on trainer state " + path);
}

void Trainer::load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open trainer state " + path);
  if (get_u64(in) != kTrainerStateMagic)
    throw DataError("bad trainer state magic in " + path);
  if (get_u64(in) != 1) throw DataError("unsupported trainer state version");
  if (get_u64(in) != static_cast<std::uint64_t>(user_count_) ||
      get_u64(in) != static_cast<std::uint64_t>(item_count_) ||
      get_u64(in) != static_cast<std::uint64_t>(cfg_.dim))
    throw DataError("trainer state shape mismatch");
  epoch_ = static_cast<int>(get_u64(in));
  opt_.step = static_cast<long>(get_u64(in));
  best_epoch_ = static_cast<int>(get_u64(in)) - 1;
  epochs_since_improvement_ = static_cast<int>(get_u64(in));
  best_val_ = std::bit_cast<double>(get_u64(in));
  get_mat(in, state_.user_emb);
  get_mat(in, state_.item_emb);
  get_mat(in, opt_.m_user);
  get_mat(in, opt_.v_user);
  get_mat(in, opt_.m_item);
  get_mat(in, opt_.v_item);
  get_mat(in, best_state_.user_emb);
  get_mat(in, best_state_.item_emb);
  std::uint64_t mask_len = get_u64(in);
  if (mask_len != original_graph_.edge_count())
    throw DataError("trainer state mask length mismatch");
  last_interaction_mask_.keep.resize(mask_len);
  for (auto& k : last_interaction_mask_.keep) k = in.get() ? 1 : 0;
  if (!in) throw DataError("truncated trainer state " + path);
  prev_denoised_graph_ = apply_mask(original_graph_, last_interaction_mask_);
  denoised_graph_ = prev_denoised_graph_;
}

}  // namespace drec
