#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "levyexp/errors.hpp"
#include "levyexp/rational_roots.hpp"
#include "test_support.hpp"

using namespace levyexp;

namespace {

LevyModel brownian() {
  LevyModel m;
  m.sigma = std::sqrt(2.0);
  m.mu = -1.0;
  return m;
}

LevyModel kou(double rho_hat) {
  LevyModel m;
  m.sigma = 0.3;
  m.mu = 0.05;
  m.positive_jumps.push_back({3.0, {2.0}});
  m.negative_jumps.push_back({rho_hat, {1.5}});
  return m;
}

/// Eigenvalues of the companion matrix of p.
std::vector<cplx> companion_roots(const Polynomial& p) {
  const int n = p.degree();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) c(i, n - 1) = -p[i] / p.leading();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return r;
}

bool by_real(cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

}  // namespace

TEST_CASE("rational form of a pure diffusion") {
  const RationalForm r = to_rational(brownian());
  REQUIRE(r.num_degree() == 2);
  CHECK(std::abs(r.num[0]) < 1e-15);
  CHECK(std::abs(r.num[1] / r.den.leading() - cplx(-1.0)) < 1e-15);
  CHECK(std::abs(r.num[2] / r.den.leading() - cplx(1.0)) < 1e-15);
  CHECK(r.den_degree() == 0);
  CHECK(r.relation == ModelCase::diffusive);
}

TEST_CASE("rational form of a two-sided pure jump model") {
  LevyModel m;
  m.positive_jumps.push_back({3.0, {2.0}});
  m.negative_jumps.push_back({2.0, {1.5}});
  const RationalForm r = to_rational(m);
  CHECK(r.den_degree() == 2);
  CHECK(r.num_degree() == 2);
  CHECK(r.relation == ModelCase::pure_jump);
  // P is (3 - z)(2 + z) = 6 + z - z^2 up to normalisation.
  const Polynomial p = Polynomial::linear(3.0, -1.0) * Polynomial::linear(2.0, 1.0);
  const cplx scale = r.den.leading() / p.leading();
  for (int k = 0; k <= 2; ++k) CHECK(std::abs(r.den[k] - scale * p[k]) < 1e-14);
  CHECK(std::abs(r.num.leading() / r.den.leading() - cplx(-17.0 / 12.0)) < 1e-14);
  const cplx far = r.num(1e7) / r.den(1e7);
  CHECK(std::abs(far - cplx(-17.0 / 12.0)) < 1e-6);
}

TEST_CASE("degree bookkeeping with a diffusion") {
  LevyModel m;
  m.sigma = 1.0;
  m.positive_jumps.push_back({1.0, {1.0}});
  const RationalForm r = to_rational(m);
  CHECK(r.den_degree() == 1);
  CHECK(r.num_degree() == 3);
}

TEST_CASE("quadratic roots of the pure diffusion") {
  const RootSet r = solve(brownian(), 2.0);
  REQUIRE(r.K() == 1);
  REQUIRE(r.K_hat() == 1);
  CHECK(std::abs(r.zeta[0] - cplx(2.0)) < 1e-14);
  CHECK(std::abs(r.zeta_hat[0] - cplx(1.0)) < 1e-14);
  CHECK(cramer_abscissa(r) == doctest::Approx(2.0).epsilon(1e-14));

  const RootSet r0 = solve(brownian(), 0.0);
  REQUIRE(r0.K() == 1);
  REQUIRE(r0.K_hat() == 1);
  CHECK(std::abs(r0.zeta[0] - cplx(1.0)) < 1e-14);
  CHECK(r0.zeta_hat[0] == cplx(0.0));
  CHECK(cramer_abscissa(r0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("q = 0 needs a negative mean") {
  LevyModel m;
  m.sigma = 1.0;
  m.mu = 0.5;
  CHECK_THROWS_AS(solve(m, 0.0), PreconditionError);
}

TEST_CASE("Kou roots match the companion-matrix oracle") {
  const LevyModel m = kou(2.1);
  const RootSet r = solve(m, 1.0);
  CHECK(r.K() == 2);
  CHECK(r.K_hat() == 2);
  const RationalForm rf = to_rational(m);
  std::vector<cplx> oracle = companion_roots(rf.num - cplx(1.0) * rf.den);
  REQUIRE(oracle.size() == 4);
  std::vector<cplx> mine = r.zeta;
  for (cplx z : r.zeta_hat) mine.push_back(-z);
  std::sort(oracle.begin(), oracle.end(), by_real);
  std::sort(mine.begin(), mine.end(), by_real);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(mine[i] - oracle[i]) < 1e-10 * (1.0 + std::abs(oracle[i])));
    CHECK(std::abs(laplace_exponent(m, mine[i]) - 1.0) < 1e-9);
  }
  // theta is the smallest right-half-plane root of the oracle
  double theta = 1e300;
  for (cplx z : oracle)
    if (z.real() > 0) theta = std::min(theta, z.real());
  CHECK(cramer_abscissa(r) == doctest::Approx(theta).epsilon(1e-12));
  CHECK(check_assumptions(m, r).all_passed());
}

TEST_CASE("assumption audit catches integer poles and hatted multiplicity") {
  const LevyModel m = kou(2.0);
  const AssumptionReport a = check_assumptions(m, solve(m, 1.0));
  CHECK_FALSE(a.all_passed());
  for (const auto& c : a.checks)
    if (c.id == "A.2") CHECK_FALSE(c.passed);
  CHECK_THROWS_AS(require_assumptions(m, solve(m, 1.0)), AssumptionError);

  LevyModel h = kou(2.1);
  h.negative_jumps[0].alphas = {1.0, 0.5};
  const AssumptionReport b = check_assumptions(h, solve(h, 1.0));
  for (const auto& c : b.checks)
    if (c.id == "A.1") CHECK_FALSE(c.passed);
}

TEST_CASE("count laws on fixtures and random models") {
  for (const auto& f : testing::all_fixtures()) {
    const LevyModel m = testing::fixture(f.name);
    const RootSet r = solve(m, f.q);
    const auto [k, kh] = expected_root_counts(m);
    CHECK(r.K() == k);
    CHECK(r.K_hat() == kh);
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uq(0.1, 5.0);
  for (auto c : {testing::RandomCase::diffusive, testing::RandomCase::drift_up,
                 testing::RandomCase::drift_down, testing::RandomCase::pure_jump}) {
    for (int i = 0; i < 100; ++i) {
      const LevyModel m = testing::random_model(rng, c);
      REQUIRE(validate(m).ok());
      const RootSet r = solve(m, uq(rng));
      const auto [k, kh] = expected_root_counts(m);
      CHECK(r.K() == k);
      CHECK(r.K_hat() == kh);
      CHECK(r.K() + r.K_hat() == to_rational(m).num_degree());
    }
  }
}

TEST_CASE("first roots are real and minimal, residuals are small, conjugates close") {
  for (const auto& f : testing::all_fixtures()) {
    const LevyModel m = testing::fixture(f.name);
    const RootSet r = solve(m, f.q);
    CHECK(r.zeta[0].imag() == 0.0);
    CHECK(r.zeta_hat[0].imag() == 0.0);
    for (cplx z : r.zeta) {
      CHECK(z.real() >= r.zeta[0].real());
      CHECK(std::abs(laplace_exponent(m, z) - f.q) < 1e-9 * std::max(1.0, f.q));
      bool has_conj = false;
      for (cplx w : r.zeta) has_conj |= std::abs(w - std::conj(z)) < 1e-12 * (1.0 + std::abs(z));
      CHECK(has_conj);
    }
    for (cplx z : r.zeta_hat) {
      CHECK(z.real() >= r.zeta_hat[0].real());
      if (z != cplx(0.0)) CHECK(std::abs(laplace_exponent(m, -z) - f.q) < 1e-9 * std::max(1.0, f.q));
      bool has_conj = false;
      for (cplx w : r.zeta_hat) has_conj |= std::abs(w - std::conj(z)) < 1e-12 * (1.0 + std::abs(z));
      CHECK(has_conj);
    }
  }
}

TEST_CASE("zeta_1 increases with q") {
  for (const auto& f : testing::core_fixtures()) {
    const LevyModel m = testing::fixture(f.name);
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double t = solve(m, 0.1 * i).zeta[0].real();
      CHECK(t > prev);
      prev = t;
    }
  }
}

TEST_CASE("roots next to a pole are accepted at the rounding floor") {
  // rho = 3.2420 and 3.2499 trap a root about 1e-4 from a pole, where |psi'| ~ 1e8
  LevyModel m;
  m.sigma = 0.6708980641241921;
  m.mu = 0.1264331054813148;
  m.positive_jumps.push_back({3.2498984815033434, {1.6848649298258451, 0.9659916659046541}});
  m.positive_jumps.push_back({3.242001894784324, {1.2189759440349588}});
  m.negative_jumps.push_back({5.202194109947797, {1.1667022701209335}});
  m.negative_jumps.push_back({3.0798879644259927, {2.390636746208259}});
  const double q = 4.2817460932520817;
  const RootSet r = solve(m, q);
  const auto [k, kh] = expected_root_counts(m);
  CHECK(r.K() == k);
  CHECK(r.K_hat() == kh);
  for (cplx z : r.zeta) {
    const double floor = 32.0 * std::numeric_limits<double>::epsilon() * std::abs(z) *
                         std::abs(laplace_exponent_derivative(m, z));
    CHECK(std::abs(laplace_exponent(m, z) - q) <= std::max(1e-9 * q, floor));
  }
}
