#include "drec/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drec/errors.hpp"
#include "drec/rng.hpp"

namespace drec {

namespace {

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Normalize each row, take absolute values, stamp the target's signs.
Mat sign_matched(const Mat& target, const Mat& raw) {
  Mat delta(target.rows(), target.cols());
  for (std::size_t r = 0; r < target.rows(); ++r) {
    double n = norm2(raw.row(r));
    if (n == 0.0) continue;  // zero source row: no perturbation
    auto out = delta.row(r);
    auto t = target.row(r);
    auto src = raw.row(r);
    for (std::size_t c = 0; c < target.cols(); ++c)
      out[c] = sign_of(t[c]) * std::abs(src[c] / n);
  }
  return delta;
}

std::vector<int> draw_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace

Mat collaborative_noise(const Mat& target, const Mat& source,
                        std::span<const int> permutation) {
  if (target.rows() != source.rows() || target.cols() != source.cols())
    throw UsageError("noise source and target shapes differ");
  if (permutation.size() != target.rows())
    throw UsageError("permutation length does not match row count");
  Mat shuffled(source.rows(), source.cols());
  for (std::size_t r = 0; r < source.rows(); ++r) {
    auto dst = shuffled.row(r);
    auto src = source.row(permutation[r]);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return sign_matched(target, shuffled);
}

Mat random_noise(const Mat& target, std::mt19937_64& rng) {
  Mat raw(target.rows(), target.cols());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : raw.data()) v = normal(rng);
  return sign_matched(target, raw);
}

Mat apply_noise(const Mat& target, const Mat& delta, double epsilon) {
  Mat out = target;
  out.add_scaled(delta, -epsilon);
  return out;
}

NoisePair make_noise_pair(const Mat& target, const Mat& source,
                          const PerturbationConfig& cfg) {
  if (cfg.epsilon < 0.0) throw ConfigError("epsilon must be >= 0");
  auto rng = make_rng(cfg.seed, RngStream::kPerturbation);
  NoisePair pair;
  if (cfg.mode == PerturbMode::kCollaborative) {
    auto perm1 = draw_permutation(target.rows(), rng);
    auto perm2 = draw_permutation(target.rows(), rng);
    pair.delta1 = collaborative_noise(target, source, perm1);
    pair.delta2 = collaborative_noise(target, source, perm2);
  } else {
    pair.delta1 = random_noise(target, rng);
    pair.delta2 = random_noise(target, rng);
  }
  return pair;
}

std::pair<Mat, Mat> perturb_user_social(const Mat& p_social,
                                        const Mat& p_interaction,
                                        const PerturbationConfig& cfg) {
  auto pair = make_noise_pair(p_social, p_interaction, cfg);
  return {apply_noise(p_social, pair.delta1, cfg.epsilon),
          apply_noise(p_social, pair.delta2, cfg.epsilon)};
}

std::pair<Mat, Mat> perturb_user_interaction(const Mat& p_interaction,
                                             const Mat& p_social,
                                             const PerturbationConfig& cfg) {
  auto pair = make_noise_pair(p_interaction, p_social, cfg);
  return {apply_noise(p_interaction, pair.delta1, cfg.epsilon),
          apply_noise(p_interaction, pair.delta2, cfg.epsilon)};
}

std::pair<Mat, Mat> perturb_item(const Mat& p_item,
                                 const PerturbationConfig& cfg) {
  auto pair = make_noise_pair(p_item, p_item, cfg);
  return {apply_noise(p_item, pair.delta1, cfg.epsilon),
          apply_noise(p_item, pair.delta2, cfg.epsilon)};
}

std::pair<Mat, Mat> random_noise_variant(const Mat& p,
                                         const PerturbationConfig& cfg) {
  PerturbationConfig rp = cfg;
  rp.mode = PerturbMode::kRandom;
  auto pair = make_noise_pair(p, p, rp);
  return {apply_noise(p, pair.delta1, cfg.epsilon),
          apply_noise(p, pair.delta2, cfg.epsilon)};
}

}  // namespace drec
