#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "levyexp/errors.hpp"
#include "levyexp/mellin.hpp"
#include "oracle_values.hpp"
#include "test_support.hpp"

using namespace levyexp;

namespace {

LevyModel brownian() {
  LevyModel m;
  m.sigma = std::sqrt(2.0);
  m.mu = -1.0;
  return m;
}

cplx gamma_c(cplx z) { return std::exp(log_gamma(z)); }

}  // namespace

TEST_CASE("scale constant by case") {
  CHECK(scale_constant(brownian(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  LevyModel d;
  d.mu = -0.5;
  d.negative_jumps.push_back({2.1, {1.0}});
  CHECK(scale_constant(d, 1.0) == 0.5);
  LevyModel j;
  j.positive_jumps.push_back({3.0, {2.0}});
  j.negative_jumps.push_back({2.0, {1.5}});
  CHECK(scale_constant(j, 1.0) == doctest::Approx(29.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("Dufresne closed form") {
  const MellinParams p = make_params(brownian(), 0.0);
  CHECK(std::abs(log_big_G(p, 1.0)) < 1e-15);
  CHECK(std::abs(log_big_G(p, 0.5) - cplx(std::log(0.5))) < 1e-14);
  CHECK(std::abs(mellin_transform(p, 1.0) - cplx(1.0)) < 1e-14);
  CHECK(testing::rel_err(mellin_transform(p, 1.5), cplx(std::sqrt(std::numbers::pi))) < 1e-13);
  for (cplx s : {cplx(0.3, 2.0), cplx(1.7, -5.0)})
    CHECK(testing::rel_err(mellin_transform(p, s), gamma_c(2.0 - s)) < 1e-12);
  CHECK_THROWS_AS(moment(p, 1), MomentError);
}

TEST_CASE("moments of the Brownian case") {
  CHECK(moment(make_params(brownian(), 2.0), 1) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(testing::rel_err(mellin_transform(make_params(brownian(), 2.0), 2.0), cplx(0.5)) < 1e-13);
  CHECK(moment(make_params(brownian(), 6.0), 2) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("strip is enforced") {
  const MellinParams p = make_params(testing::fixture("kou"), 1.0);
  CHECK_THROWS_AS(mellin_transform(p, 0.0), StripError);
  CHECK_THROWS_AS(mellin_transform(p, p.strip_right()), StripError);
  CHECK_THROWS_AS(mellin_transform(p, {-0.1, 1.0}), StripError);
}

TEST_CASE("Mellin transform matches the mpmath oracle") {
  for (const auto& c : oracle::cases()) {
    const MellinParams p = make_params(testing::fixture(c.fixture), c.q);
    CHECK(p.A == doctest::Approx(c.A).epsilon(1e-14));
    CHECK(p.theta == doctest::Approx(c.theta).epsilon(1e-13));
    for (const auto& pt : c.mellin) {
      INFO(c.fixture << " s=" << pt.x);
      CHECK(testing::rel_err(mellin_transform(p, pt.x), cplx(pt.value)) < 1e-12);
    }
  }
}

TEST_CASE("M(1) = 1 and conjugate symmetry on every fixture") {
  std::mt19937_64 rng(3);
  for (const auto& f : testing::all_fixtures()) {
    const MellinParams p = make_params(testing::fixture(f.name), f.q);
    CHECK(std::abs(mellin_transform(p, 1.0) - cplx(1.0)) < 1e-12);
    for (int i = 0; i < 20; ++i) {
      const cplx s = testing::random_s(rng, p.strip_right(), 5.0);
      CHECK(std::abs(mellin_transform(p, std::conj(s)) - std::conj(mellin_transform(p, s))) <
            1e-12 * std::abs(mellin_transform(p, s)));
    }
  }
}

TEST_CASE("functional equation and factorization") {
  std::mt19937_64 rng(5);
  for (const auto& f : testing::all_fixtures()) {
    const LevyModel m = testing::fixture(f.name);
    const MellinParams p = make_params(m, f.q);
    for (int i = 0; i < 50; ++i) {
      const cplx s = testing::random_s(rng, p.theta, 4.0);
      const cplx lhs = mellin_transform(p, s + 1.0);
      const cplx rhs = s * mellin_transform(p, s) / (f.q - laplace_exponent(m, s));
      CHECK(testing::rel_err(rhs, lhs) < 1e-10);
      const cplx r = recurrence_ratio(p, s);
      CHECK(testing::rel_err(recurrence_ratio_factorized(p, s), r) < 1e-10);
    }
  }
}

TEST_CASE("decay along vertical lines") {
  for (const char* name : {"kou", "bm_q2"}) {
    const MellinParams p = make_params(testing::fixture(name), name == std::string("kou") ? 1.0 : 2.0);
    const double c = std::abs(mellin_transform(p, {1.0, 10.0})) * std::exp(std::numbers::pi * 10.0 / 4.0);
    for (double t = 10.0; t <= 100.0; t += 5.0)
      CHECK(std::abs(mellin_transform(p, {1.0, t})) <= c * std::exp(-std::numbers::pi * t / 4.0) * (1.0 + 1e-12));
  }
  const MellinParams d = make_params(testing::fixture("drift_down"), 1.0);
  CHECK(std::abs(mellin_transform(d, {1.0, 100.0})) > std::exp(-10.0) * std::abs(mellin_transform(d, {1.0, 10.0})));
}

TEST_CASE("joint transform") {
  std::mt19937_64 rng(9);
  for (const auto& f : testing::all_fixtures()) {
    if (f.q == 0.0) continue;
    const MellinParams p = make_params(testing::fixture(f.name), f.q);
    CHECK(std::abs(joint_transform(p, 0.0, 1.0) - cplx(1.0)) < 1e-12);
    for (int i = 0; i < 10; ++i) {
      const cplx s = testing::random_s(rng, p.strip_right(), 3.0);
      CHECK(testing::rel_err(joint_transform(p, 0.0, s), mellin_transform(p, s)) < 1e-12);
    }
  }
  const MellinParams kou = make_params(testing::fixture("kou"), 1.0);
  // s = 1 gives the Esscher normalisation q / (q - psi(u))
  const cplx want = 1.0 / (1.0 - laplace_exponent(kou.model, 0.3));
  CHECK(testing::rel_err(joint_transform(kou, 0.3, 1.0), want) < 1e-12);
  CHECK_THROWS(joint_transform(kou, kou.theta + 0.1, 1.0));
}
