#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "levyexp/montecarlo.hpp"
#include "levyexp/simd/path_kernel.hpp"
#include "test_support.hpp"

using namespace levyexp;
namespace simd = levyexp::simd;

namespace {

std::vector<double> increments(std::size_t n, double h, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(-0.5 * h, std::sqrt(h));
  std::vector<double> v(n);
  for (double& x : v) x = z(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernel is the trapezoid rule") {
  const std::vector<double> inc = {0.1, -0.2, 0.05};
  double x_end = 0.0;
  const double h = 0.01;
  const double got = simd::segment_integral_scalar(inc.data(), inc.size(), 0.3, h, &x_end);
  const double x[] = {0.3, 0.4, 0.2, 0.25};
  const double want = h * (0.5 * std::exp(x[0]) + std::exp(x[1]) + std::exp(x[2]) + 0.5 * std::exp(x[3]));
  CHECK(got == doctest::Approx(want).epsilon(1e-15));
  CHECK(x_end == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("AVX2 kernel matches the scalar reference") {
  if (!simd::avx2_compiled() || !simd::avx2_available()) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 63u, 1000u, 4099u}) {
    const auto inc = increments(n, 0.005, static_cast<unsigned>(n) + 1);
    double e1 = 0.0, e2 = 0.0;
    const double a = simd::segment_integral_scalar(inc.data(), n, -0.7, 0.005, &e1);
    const double b = simd::segment_integral_avx2(inc.data(), n, -0.7, 0.005, &e2);
    INFO("n=" << n);
    CHECK(std::abs(a - b) <= 1e-13 * std::abs(a));
    CHECK(std::abs(e1 - e2) <= 1e-12);
  }
}

TEST_CASE("forced ISA changes nothing in the simulated law") {
  const LevyModel m = testing::fixture("kou");
  McConfig cfg;
  cfg.paths = 2000;
  const simd::Isa original = simd::active_isa();
  simd::force_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  const auto a = simulate_exponential_functional(m, 1.0, cfg);
  if (simd::avx2_compiled() && simd::avx2_available()) {
    simd::force_isa(simd::Isa::avx2);
    CHECK(simd::active_isa() == simd::Isa::avx2);
    const auto b = simulate_exponential_functional(m, 1.0, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12 * a[i]);
  }
  simd::force_isa(original);
}
