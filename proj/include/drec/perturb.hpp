#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "drec/mat.hpp"

namespace drec {

enum class PerturbMode {
  kCollaborative,  // noise rows drawn from the companion embedding family
  kRandom,         // Gaussian rows, sign-matched the same way
};

struct PerturbationConfig {
  double epsilon = 0.1;
  PerturbMode mode = PerturbMode::kCollaborative;
  std::uint64_t seed = 0;
};

// Unit-norm noise rows: shuffle the source rows, L2-normalize each row,
// take the elementwise absolute value, then stamp on the target's sign
// pattern so every noise row lies in its target row's hyperoctant. Zero
// shuffled rows yield zero noise rows.
Mat collaborative_noise(const Mat& target, const Mat& source,
                        std::span<const int> permutation);

// Standard-normal rows pushed through the same normalize/sign-match path.
Mat random_noise(const Mat& target, std::mt19937_64& rng);

// target - epsilon * delta; each nonzero noise row displaces its target row
// by exactly epsilon in L2 norm.
Mat apply_noise(const Mat& target, const Mat& delta, double epsilon);

// Two independently drawn noise realizations for one embedding family.
struct NoisePair {
  Mat delta1;
  Mat delta2;
};

NoisePair make_noise_pair(const Mat& target, const Mat& source,
                          const PerturbationConfig& cfg);

// Two perturbed views of the user social table, noise built from the user
// interaction table (and vice versa); items perturb against themselves.
std::pair<Mat, Mat> perturb_user_social(const Mat& p_social,
                                        const Mat& p_interaction,
                                        const PerturbationConfig& cfg);
std::pair<Mat, Mat> perturb_user_interaction(const Mat& p_interaction,
                                             const Mat& p_social,
                                             const PerturbationConfig& cfg);
std::pair<Mat, Mat> perturb_item(const Mat& p_item,
                                 const PerturbationConfig& cfg);
std::pair<Mat, Mat> random_noise_variant(const Mat& p,
                                         const PerturbationConfig& cfg);

}  // namespace drec
