#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "drec/graph.hpp"
#include "drec/mat.hpp"

namespace drec {

struct DenoiseThresholds {
  double social = 0.8;        // edges with PC below this are removed
  double interaction = 0.4;   // edges with IC below this are removed
  double gaussian_sigma = 20.0;
};

inline constexpr std::size_t kScoreHistogramBins = 20;

// Per-epoch denoising statistics, one instance per domain pass; merge()
// combines the social and interaction halves into the epoch report.
struct DenoiseReport {
  std::size_t social_edge_count = 0;
  std::size_t social_edges_removed = 0;
  std::size_t interaction_edge_count = 0;
  std::size_t interaction_edges_removed = 0;
  std::size_t removed_flagged_noise = 0;  // removed edges carrying the flag
  std::size_t flagged_total = 0;
  std::array<std::size_t, kScoreHistogramBins> pc_histogram{};
  std::array<std::size_t, kScoreHistogramBins> ic_histogram{};

  void merge(const DenoiseReport& other);
  std::string to_key_value_block() const;
};

// (1 + cos(a,b))/2 * exp(-|a-b|^2 / (2 sigma^2)), in [0, 1]. Cosine of a
// zero vector is 0 by convention, giving a direction factor of 1/2.
double preference_consistency(std::span<const double> a,
                              std::span<const double> b, double sigma);

// Same functional form, scoring a social-enhanced user row against an item
// row.
double interaction_compatibility(std::span<const double> user_enh,
                                 std::span<const double> item,
                                 double sigma);

struct SocialDenoiseResult {
  SocialNetwork network;
  EdgeMask mask;
  DenoiseReport report;
};

struct InteractionDenoiseResult {
  InteractionGraph graph;
  EdgeMask mask;
  DenoiseReport report;
};

// Removes edges of the ORIGINAL network whose preference consistency is
// strictly below the social threshold; edges scoring exactly at the
// threshold are kept. `pref_users` holds the propagated user rows.
SocialDenoiseResult denoise_social(const SocialNetwork& original,
                                   const Mat& pref_users,
                                   const DenoiseThresholds& thresholds);

// Aggregates first-order social-neighbor preference rows with coefficient
// 1/sqrt(deg(u) deg(v)) over the DENOISED network; users with no remaining
// neighbors get the zero row.
Mat social_enhance(const Mat& pref_users, const SocialNetwork& denoised);

// Removes edges of the ORIGINAL graph whose interaction compatibility is
// strictly below the interaction threshold. `flags`, when nonempty, is
// aligned with the original graph's edge ids and tallies how many removed
// edges were fabricated.
InteractionDenoiseResult denoise_interaction(
    const InteractionGraph& original, const Mat& enhanced_users,
    const Mat& pref_items, const DenoiseThresholds& thresholds,
    std::span<const std::uint8_t> flags = {});

}  // namespace drec
