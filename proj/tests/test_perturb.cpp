#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "drec/errors.hpp"
#include "drec/perturb.hpp"
#include "test_support.hpp"

using namespace drec;

namespace {
double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }
}  // namespace

TEST_CASE("noise rows inherit the target hyperoctant") {
  std::mt19937_64 rng(41);
  Mat target = testsup::random_mat(6, 5, rng);
  Mat source = testsup::random_mat(6, 5, rng);
  std::vector<int> perm(6);
  std::iota(perm.begin(), perm.end(), 0);
  Mat delta = collaborative_noise(target, source, perm);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 5; ++c)
      CHECK(sgn(delta(r, c)) * sgn(target(r, c)) >= 0.0);
}

TEST_CASE("all-positive target gives the normalized absolute source row") {
  Mat target(1, 3);
  target(0, 0) = 1.0;
  target(0, 1) = 2.0;
  target(0, 2) = 3.0;
  Mat source(1, 3);
  source(0, 0) = -3.0;
  source(0, 1) = 0.0;
  source(0, 2) = 4.0;
  std::vector<int> perm{0};
  Mat delta = collaborative_noise(target, source, perm);
  CHECK(delta(0, 0) == doctest::Approx(0.6));
  CHECK(delta(0, 1) == doctest::Approx(0.0));
  CHECK(delta(0, 2) == doctest::Approx(0.8));
  CHECK(norm2(delta.row(0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("zero target component zeroes the noise component") {
  Mat target(1, 2);
  target(0, 0) = 0.0;
  target(0, 1) = -1.0;
  Mat source(1, 2);
  source(0, 0) = 5.0;
  source(0, 1) = 5.0;
  std::vector<int> perm{0};
  Mat delta = collaborative_noise(target, source, perm);
  CHECK(delta(0, 0) == 0.0);
  CHECK(delta(0, 1) < 0.0);
}

TEST_CASE("constant source rows make the noise shuffle-invariant") {
  std::mt19937_64 rng(42);
  Mat target = testsup::random_mat(4, 3, rng);
  Mat source(4, 3);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 3; ++c) source(r, c) = 1.0 + 0.5 * c;
  std::vector<int> identity{0, 1, 2, 3};
  std::vector<int> rotated{3, 0, 1, 2};
  Mat d1 = collaborative_noise(target, source, identity);
  Mat d2 = collaborative_noise(target, source, rotated);
  CHECK(testsup::max_abs_diff(d1, d2) == 0.0);
}

TEST_CASE("zero shuffled row yields a zero noise row") {
  Mat target(2, 2);
  target(0, 0) = target(0, 1) = 1.0;
  target(1, 0) = target(1, 1) = 1.0;
  Mat source(2, 2);  // all zeros
  std::vector<int> perm{0, 1};
  Mat delta = collaborative_noise(target, source, perm);
  CHECK(delta.frobenius_sq() == 0.0);
}

TEST_CASE("epsilon zero is the identity") {
  std::mt19937_64 rng(43);
  Mat p = testsup::random_mat(5, 4, rng);
  Mat q = testsup::random_mat(5, 4, rng);
  PerturbationConfig cfg;
  cfg.epsilon = 0.0;
  cfg.seed = 9;
  auto [v1, v2] = perturb_user_social(p, q, cfg);
  CHECK(v1 == p);
  CHECK(v2 == p);
}

TEST_CASE("per-row displacement equals epsilon exactly") {
  std::mt19937_64 rng(44);
  PerturbationConfig cfg;
  cfg.epsilon = 0.37;
  cfg.seed = 10;
  Mat p = testsup::random_mat(50, 8, rng);
  Mat q = testsup::random_mat(50, 8, rng);
  auto [v1, v2] = perturb_user_interaction(p, q, cfg);
  for (std::size_t r = 0; r < p.rows(); ++r) {
    std::vector<double> diff(p.cols());
    for (std::size_t c = 0; c < p.cols(); ++c) diff[c] = v1(r, c) - p(r, c);
    CHECK(std::abs(norm2(diff) - cfg.epsilon) < 1e-12);
  }
}

TEST_CASE("hand case: social row perturbed by interaction noise") {
  // single user, identity shuffle forced by the 1-row matrices
  Mat p_social(1, 2);
  p_social(0, 0) = 2.0;
  p_social(0, 1) = -1.0;
  Mat p_inter(1, 2);
  p_inter(0, 0) = 3.0;
  p_inter(0, 1) = 4.0;
  PerturbationConfig cfg;
  cfg.epsilon = 0.5;
  auto [v1, v2] = perturb_user_social(p_social, p_inter, cfg);
  // delta = sign(2,-1) .* |(0.6, 0.8)| = (0.6, -0.8)
  CHECK(v1(0, 0) == doctest::Approx(2.0 - 0.5 * 0.6).epsilon(1e-14));
  CHECK(v1(0, 1) == doctest::Approx(-1.0 + 0.5 * 0.8).epsilon(1e-14));
  CHECK(v2(0, 0) == doctest::Approx(v1(0, 0)).epsilon(1e-14));
}

TEST_CASE("hand case: mirrored roles for the interaction view") {
  Mat p_inter(1, 2);
  p_inter(0, 0) = 2.0;
  p_inter(0, 1) = -1.0;
  Mat p_social(1, 2);
  p_social(0, 0) = 3.0;
  p_social(0, 1) = 4.0;
  PerturbationConfig cfg;
  cfg.epsilon = 0.25;
  auto [v1, v2] = perturb_user_interaction(p_inter, p_social, cfg);
  CHECK(v1(0, 0) == doctest::Approx(2.0 - 0.25 * 0.6).epsilon(1e-14));
  CHECK(v1(0, 1) == doctest::Approx(-1.0 + 0.25 * 0.8).epsilon(1e-14));
}

TEST_CASE("single item self-perturbation shrinks along itself") {
  Mat p(1, 3);
  p(0, 0) = 3.0;
  p(0, 1) = 0.0;
  p(0, 2) = -4.0;
  PerturbationConfig cfg;
  cfg.epsilon = 0.2;
  auto [v1, v2] = perturb_item(p, cfg);
  double norm = 5.0;
  for (int c = 0; c < 3; ++c) {
    double want = (1.0 - cfg.epsilon / norm) * p(0, c);
    CHECK(v1(0, c) == doctest::Approx(want).epsilon(1e-14));
    CHECK(v2(0, c) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("the two views use independent permutations but a fixed seed") {
  std::mt19937_64 rng(45);
  Mat p = testsup::random_mat(30, 4, rng);
  Mat q = testsup::random_mat(30, 4, rng);
  PerturbationConfig cfg;
  cfg.epsilon = 0.3;
  cfg.seed = 123;
  auto [a1, a2] = perturb_user_social(p, q, cfg);
  CHECK(testsup::max_abs_diff(a1, a2) > 1e-6);  // distinct shuffles
  auto [b1, b2] = perturb_user_social(p, q, cfg);
  CHECK(a1 == b1);
  CHECK(a2 == b2);
}

TEST_CASE("random variant: displacement and reproducibility") {
  std::mt19937_64 rng(46);
  Mat p = testsup::random_mat(20, 6, rng);
  PerturbationConfig cfg;
  cfg.epsilon = 0.15;
  cfg.seed = 7;
  auto [v1, v2] = random_noise_variant(p, cfg);
  for (std::size_t r = 0; r < p.rows(); ++r) {
    std::vector<double> diff(p.cols());
    for (std::size_t c = 0; c < p.cols(); ++c) diff[c] = v1(r, c) - p(r, c);
    CHECK(std::abs(norm2(diff) - cfg.epsilon) < 1e-12);
    for (std::size_t c = 0; c < p.cols(); ++c)
      CHECK(sgn(v1(r, c) - p(r, c)) * sgn(p(r, c)) <= 0.0);  // subtracted
  }
  auto [w1, w2] = random_noise_variant(p, cfg);
  CHECK(v1 == w1);
  CHECK(v2 == w2);
}

TEST_CASE("perturbation is gradient-transparent under frozen noise") {
  std::mt19937_64 rng(47);
  Mat p = testsup::random_mat(4, 3, rng);
  Mat q = testsup::random_mat(4, 3, rng);
  PerturbationConfig cfg;
  cfg.epsilon = 0.2;
  cfg.seed = 3;
  auto pair = make_noise_pair(p, q, cfg);
  Mat weights = testsup::random_mat(4, 3, rng);

  // probe through the perturbed view with the noise held fixed
  auto probe = [&](const Mat& base) {
    Mat view = apply_noise(base, pair.delta1, cfg.epsilon);
    double acc = 0.0;
    for (std::size_t k = 0; k < view.data().size(); ++k)
      acc += weights.data()[k] * view.data()[k];
    return acc;
  };
  Mat fd = testsup::fd_gradient_mat(probe, p, 1e-6);
  CHECK(testsup::rel_err(fd, weights) < 1e-9);  // identity jacobian
}

TEST_CASE("shape mismatches are rejected") {
  Mat a(2, 2), b(3, 2);
  std::vector<int> perm{0, 1};
  CHECK_THROWS_AS(collaborative_noise(a, b, perm), UsageError);
}
