#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "drec/denoise.hpp"
#include "drec/errors.hpp"
#include "test_support.hpp"

using namespace drec;

namespace {

// Test-local transcription of the scoring formula, used as the oracle for
// threshold-count checks.
double score_oracle(std::span<const double> a, std::span<const double> b,
                    double sigma) {
  double na = 0, nb = 0, ab = 0, d2 = 0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    na += a[c] * a[c];
    nb += b[c] * b[c];
    ab += a[c] * b[c];
    d2 += (a[c] - b[c]) * (a[c] - b[c]);
  }
  double cosv = (na == 0 || nb == 0) ? 0.0 : ab / std::sqrt(na * nb);
  return (1.0 + cosv) / 2.0 * std::exp(-d2 / (2.0 * sigma * sigma));
}

// Rows whose pairwise preference consistency is close to prescribed values:
// unit-ish vectors scaled tiny so the gaussian factor is ~1 and PC is
// dominated by (1+cos)/2.
Mat rows_with_angles(const std::vector<double>& cosines) {
  Mat m(cosines.size() + 1, 2);
  double scale = 1e-3;
  m(0, 0) = scale;
  m(0, 1) = 0.0;
  for (std::size_t k = 0; k < cosines.size(); ++k) {
    double angle = std::acos(cosines[k]);
    m(k + 1, 0) = scale * std::cos(angle);
    m(k + 1, 1) = scale * std::sin(angle);
  }
  return m;
}

}  // namespace

TEST_CASE("identical nonzero rows score 1") {
  std::vector<double> v{0.3, -0.2, 0.9};
  CHECK(preference_consistency(v, v, 20.0) == doctest::Approx(1.0));
  CHECK(interaction_compatibility(v, v, 20.0) == doctest::Approx(1.0));
}

TEST_CASE("antipodal rows score 0") {
  std::vector<double> a{1.0, 0.0};
  std::vector<double> b{-1.0, 0.0};
  CHECK(preference_consistency(a, b, 20.0) == doctest::Approx(0.0));
  CHECK(interaction_compatibility(a, b, 20.0) == doctest::Approx(0.0));
}

TEST_CASE("orthogonal unit rows at sigma 20") {
  std::vector<double> a{1.0, 0.0};
  std::vector<double> b{0.0, 1.0};
  double want = 0.5 * std::exp(-2.0 / 800.0);  // 0.498751...
  CHECK(preference_consistency(a, b, 20.0) ==
        doctest::Approx(want).epsilon(1e-12));
  CHECK(preference_consistency(a, b, 20.0) ==
        doctest::Approx(0.498751).epsilon(1e-6));
  CHECK(interaction_compatibility(a, b, 20.0) ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("scores stay in [0,1] and are symmetric on random input") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> a(4), b(4);
    for (auto& v : a) v = dist(rng);
    for (auto& v : b) v = dist(rng);
    double s1 = preference_consistency(a, b, 20.0);
    double s2 = preference_consistency(b, a, 20.0);
    CHECK(s1 >= 0.0);
    CHECK(s1 <= 1.0);
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-12));
  }
}

TEST_CASE("zero vector falls back to the half direction factor") {
  std::vector<double> zero{0.0, 0.0};
  std::vector<double> v{3.0, 4.0};
  double want = 0.5 * std::exp(-25.0 / 800.0);
  CHECK(interaction_compatibility(zero, v, 20.0) ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("cosine factor is invariant under joint positive scaling") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(3), b(3);
    for (auto& v : a) v = dist(rng) * 1e-4;
    for (auto& v : b) v = dist(rng) * 1e-4;
    // at tiny norms the gaussian factor is ~1 and PC is the cosine factor
    double s = preference_consistency(a, b, 20.0);
    std::vector<double> a2 = a, b2 = b;
    for (auto& v : a2) v *= 3.0;
    for (auto& v : b2) v *= 3.0;
    double s2 = preference_consistency(a2, b2, 20.0);
    CHECK(s == doctest::Approx(s2).epsilon(1e-6));
  }
}

TEST_CASE("social denoising thresholds by preference consistency") {
  // edges (0,1), (0,2), (0,3) carrying PC approximately 0.9, 0.55, 0.4
  Mat rows = rows_with_angles({0.8, 0.1, -0.2});
  auto net = build_social_network({{0, 1}, {0, 2}, {0, 3}}, 4);
  DenoiseThresholds th;
  th.social = 0.5;

  // oracle: count edges whose formula score is below threshold
  std::size_t expect_removed = 0;
  for (const auto& [u, v] : net.edges)
    if (score_oracle(rows.row(u), rows.row(v), th.gaussian_sigma) < th.social)
      ++expect_removed;
  CHECK(expect_removed == 1);

  auto res = denoise_social(net, rows, th);
  CHECK(res.report.social_edges_removed == 1);
  CHECK(res.network.edge_count() == 2);
  CHECK(res.mask.kept_count() == 2);
}

TEST_CASE("zero social threshold removes nothing") {
  std::mt19937_64 rng(33);
  Mat rows = testsup::random_mat(6, 4, rng);
  auto net = build_social_network({{0, 1}, {2, 3}, {4, 5}, {1, 2}}, 6);
  DenoiseThresholds th;
  th.social = 0.0;
  auto res = denoise_social(net, rows, th);
  CHECK(res.report.social_edges_removed == 0);
  CHECK(res.network.edge_count() == net.edge_count());
}

TEST_CASE("threshold above one removes every edge for generic rows") {
  std::mt19937_64 rng(34);
  Mat rows = testsup::random_mat(6, 4, rng);
  auto net = build_social_network({{0, 1}, {2, 3}, {4, 5}}, 6);
  DenoiseThresholds th;
  th.social = 1.0 + 1e-9;
  auto res = denoise_social(net, rows, th);
  CHECK(res.report.social_edges_removed == net.edge_count());
  CHECK(res.network.edge_count() == 0);
}

TEST_CASE("social enhancement aggregates neighbor preference rows") {
  std::mt19937_64 rng(35);
  Mat rows = testsup::random_mat(5, 3, rng);

  SUBCASE("single mutual pair copies the neighbor row") {
    auto net = build_social_network({{0, 1}}, 5);
    Mat enh = social_enhance(rows, net);
    for (int c = 0; c < 3; ++c)
      CHECK(enh(0, c) == doctest::Approx(rows(1, c)).epsilon(1e-14));
  }

  SUBCASE("isolated users get the zero row") {
    auto net = build_social_network({{0, 1}}, 5);
    Mat enh = social_enhance(rows, net);
    for (int c = 0; c < 3; ++c) CHECK(enh(4, c) == 0.0);
  }

  SUBCASE("star center sums half of each leaf") {
    auto net = build_social_network({{0, 1}, {0, 2}, {0, 3}, {0, 4}}, 5);
    Mat enh = social_enhance(rows, net);
    for (int c = 0; c < 3; ++c) {
      double want =
          0.5 * (rows(1, c) + rows(2, c) + rows(3, c) + rows(4, c));
      CHECK(enh(0, c) == doctest::Approx(want).epsilon(1e-12));
      // leaves see half the center row
      CHECK(enh(1, c) == doctest::Approx(0.5 * rows(0, c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("interaction denoising thresholds by compatibility") {
  // four items at cosines 0.9, 0.55, 0.4, 0.3 from the enhanced user row;
  // scores land near 0.95, 0.775, 0.7, 0.65
  Mat rows = rows_with_angles({0.9, 0.55, 0.4, 0.3});
  Mat enhanced(1, 2);
  enhanced(0, 0) = rows(0, 0);
  enhanced(0, 1) = rows(0, 1);
  Mat items(4, 2);
  for (int i = 0; i < 4; ++i) {
    items(i, 0) = rows(i + 1, 0);
    items(i, 1) = rows(i + 1, 1);
  }
  auto g = build_interaction_graph({{0, 0}, {0, 1}, {0, 2}, {0, 3}}, 1, 4);
  DenoiseThresholds th;
  th.interaction = 0.72;

  std::size_t expect_removed = 0;
  for (const auto& [u, i] : g.edges)
    if (score_oracle(enhanced.row(u), items.row(i), th.gaussian_sigma) <
        th.interaction)
      ++expect_removed;
  CHECK(expect_removed == 2);

  auto res = denoise_interaction(g, enhanced, items, th);
  CHECK(res.report.interaction_edges_removed == 2);
  CHECK(res.graph.edge_count() == 2);
}

TEST_CASE("zero interaction threshold is the identity") {
  std::mt19937_64 rng(36);
  auto g = build_interaction_graph({{0, 0}, {0, 1}, {1, 1}}, 2, 2);
  Mat enhanced = testsup::random_mat(2, 3, rng);
  Mat items = testsup::random_mat(2, 3, rng);
  DenoiseThresholds th;
  th.interaction = 0.0;
  auto res = denoise_interaction(g, enhanced, items, th);
  CHECK(res.graph.edges == g.edges);
  CHECK(res.report.interaction_edges_removed == 0);
}

TEST_CASE("monotonicity: higher thresholds never keep a removed edge") {
  std::mt19937_64 rng(37);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < 10; ++u)
    for (int v = u + 1; v < 10; ++v)
      if (rng() % 2) edges.emplace_back(u, v);
  auto net = build_social_network(edges, 10);
  Mat rows = testsup::random_mat(10, 4, rng, 0.05);

  EdgeMask prev = EdgeMask::all(net.edge_count());
  for (double beta : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    DenoiseThresholds th;
    th.social = beta;
    auto res = denoise_social(net, rows, th);
    for (std::size_t e = 0; e < net.edge_count(); ++e)
      if (!prev.keep[e]) CHECK(!res.mask.keep[e]);
    prev = res.mask;
  }
}

TEST_CASE("denoising always restarts from the original graphs") {
  std::mt19937_64 rng(38);
  auto net = build_social_network({{0, 1}, {1, 2}, {2, 3}, {0, 3}}, 4);
  Mat rows = testsup::random_mat(4, 3, rng, 0.05);
  DenoiseThresholds th;
  th.social = 0.6;
  auto once = denoise_social(net, rows, th);
  auto twice = denoise_social(net, rows, th);
  CHECK(once.network.edges == twice.network.edges);
  CHECK(once.mask.keep == twice.mask.keep);
}

TEST_CASE("removal report tallies fabricated flags") {
  Mat rows = rows_with_angles({0.9, -0.5});
  Mat enhanced(1, 2);
  enhanced(0, 0) = rows(0, 0);
  enhanced(0, 1) = rows(0, 1);
  Mat items(2, 2);
  for (int i = 0; i < 2; ++i) {
    items(i, 0) = rows(i + 1, 0);
    items(i, 1) = rows(i + 1, 1);
  }
  auto g = build_interaction_graph({{0, 0}, {0, 1}}, 1, 2);
  std::vector<std::uint8_t> flags{0, 1};  // the low-compatibility edge is fake
  DenoiseThresholds th;
  th.interaction = 0.5;
  auto res = denoise_interaction(g, enhanced, items, th, flags);
  CHECK(res.report.interaction_edges_removed == 1);
  CHECK(res.report.removed_flagged_noise == 1);
  CHECK(res.report.flagged_total == 1);
}

TEST_CASE("histograms count every scored edge") {
  std::mt19937_64 rng(39);
  auto net = build_social_network({{0, 1}, {1, 2}, {0, 2}, {2, 3}}, 4);
  Mat rows = testsup::random_mat(4, 3, rng);
  DenoiseThresholds th;
  auto res = denoise_social(net, rows, th);
  std::size_t total = 0;
  for (auto c : res.report.pc_histogram) total += c;
  CHECK(total == net.edge_count());
}
