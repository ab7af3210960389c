#include "drec/denoise.hpp"

#include <cmath>
#include <sstream>

#include "drec/errors.hpp"

namespace drec {

void DenoiseReport::merge(const DenoiseReport& other) {
  social_edge_count += other.social_edge_count;
  social_edges_removed += other.social_edges_removed;
  interaction_edge_count += other.interaction_edge_count;
  interaction_edges_removed += other.interaction_edges_removed;
  removed_flagged_noise += other.removed_flagged_noise;
  flagged_total += other.flagged_total;
  for (std::size_t b = 0; b < kScoreHistogramBins; ++b) {
    pc_histogram[b] += other.pc_histogram[b];
    ic_histogram[b] += other.ic_histogram[b];
  }
}

std::string DenoiseReport::to_key_value_block() const {
  std::ostringstream out;
  out << "social_edge_count=" << social_edge_count << '\n'
      << "social_edges_removed=" << social_edges_removed << '\n'
      << "interaction_edge_count=" << interaction_edge_count << '\n'
      << "interaction_edges_removed=" << interaction_edges_removed << '\n'
      << "removed_flagged_noise=" << removed_flagged_noise << '\n'
      << "flagged_total=" << flagged_total << '\n';
  return out.str();
}

namespace {

double kernel_score(std::span<const double> a, std::span<const double> b,
                    double sigma) {
  if (sigma <= 0.0) throw ConfigError("gaussian sigma must be positive");
  double direction = (1.0 + cosine(a, b)) / 2.0;
  double gauss = std::exp(-dist_sq(a, b) / (2.0 * sigma * sigma));
  double s = direction * gauss;
  if (s < 0.0) s = 0.0;
  if (s > 1.0) s = 1.0;
  return s;
}

std::size_t histogram_bin(double score) {
  auto b = static_cast<std::size_t>(score * kScoreHistogramBins);
  return b >= kScoreHistogramBins ? kScoreHistogramBins - 1 : b;
}

}  // namespace

double preference_consistency(std::span<const double> a,
                              std::span<const double> b, double sigma) {
  return kernel_score(a, b, sigma);
}

double interaction_compatibility(std::span<const double> user_enh,
                                 std::span<const double> item, double sigma) {
  return kernel_score(user_enh, item, sigma);
}

SocialDenoiseResult denoise_social(const SocialNetwork& original,
                                   const Mat& pref_users,
                                   const DenoiseThresholds& thresholds) {
  SocialDenoiseResult res;
  res.mask = EdgeMask::all(original.edge_count());
  res.report.social_edge_count = original.edge_count();
  for (std::size_t e = 0; e < original.edges.size(); ++e) {
    const auto& [u, v] = original.edges[e];
    double pc = preference_consistency(pref_users.row(u), pref_users.row(v),
                                       thresholds.gaussian_sigma);
    ++res.report.pc_histogram[histogram_bin(pc)];
    if (pc < thresholds.social) {
      res.mask.keep[e] = 0;
      ++res.report.social_edges_removed;
    }
  }
  res.network = apply_mask(original, res.mask);
  return res;
}

Mat social_enhance(const Mat& pref_users, const SocialNetwork& denoised) {
  Mat enhanced(pref_users.rows(), pref_users.cols());
  for (int u = 0; u < denoised.user_count; ++u) {
    double du = denoised.degree(u);
    if (du == 0) continue;  // no remaining neighbors: zero row
    auto out = enhanced.row(u);
    for (int v : denoised.neighbors_of(u)) {
      double c = 1.0 / std::sqrt(du * denoised.degree(v));
      axpy(out, c, pref_users.row(v));
    }
  }
  return enhanced;
}

InteractionDenoiseResult denoise_interaction(
    const InteractionGraph& original, const Mat& enhanced_users,
    const Mat& pref_items, const DenoiseThresholds& thresholds,
    std::span<const std::uint8_t> flags) {
  if (!flags.empty() && flags.size() != original.edge_count())
    throw UsageError("noise flags not aligned with graph edges");
  InteractionDenoiseResult res;
  res.mask = EdgeMask::all(original.edge_count());
  res.report.interaction_edge_count = original.edge_count();
  for (auto f : flags) res.report.flagged_total += f;
  for (std::size_t e = 0; e < original.edges.size(); ++e) {
    const auto& [u, i] = original.edges[e];
    double ic = interaction_compatibility(enhanced_users.row(u),
                                          pref_items.row(i),
                                          thresholds.gaussian_sigma);
    ++res.report.ic_histogram[histogram_bin(ic)];
    if (ic < thresholds.interaction) {
      res.mask.keep[e] = 0;
      ++res.report.interaction_edges_removed;
      if (!flags.empty() && flags[e]) ++res.report.removed_flagged_noise;
    }
  }
  res.graph = apply_mask(original, res.mask);
  return res;
}

}  // namespace drec
