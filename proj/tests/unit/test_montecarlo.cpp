#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levyexp/montecarlo.hpp"
#include "test_support.hpp"

using namespace levyexp;

namespace {

LevyModel two_sided() {
  LevyModel m;
  m.positive_jumps.push_back({3.0, {2.0}});
  m.negative_jumps.push_back({2.0, {1.5}});
  return m;
}

bool within(const Estimate& e, double want, double k = 3.0) {
  return std::abs(e.value - want) <= k * e.std_error;
}

}  // namespace

TEST_CASE("jump samplers") {
  LevyModel exp3;
  exp3.positive_jumps.push_back({3.0, {2.0}});
  LevyModel gamma2;
  gamma2.positive_jumps.push_back({1.0, {0.0, 1.0}});
  const LevyModel ts = two_sided();
  const JumpSampler s1(exp3), s2(gamma2), s3(ts);
  CHECK(s1.exact());
  std::vector<double> a, b, c;
  Rng rng = path_rng(1, 0);
  for (int i = 0; i < 1'000'000; ++i) {
    a.push_back(s1(rng));
    b.push_back(s2(rng));
    c.push_back(s3(rng) > 0.0 ? 1.0 : 0.0);
  }
  CHECK(within(mean_estimate(a), 1.0 / 3.0));
  CHECK(within(mean_estimate(b), 2.0));
  CHECK(within(mean_estimate(c), 8.0 / 17.0));
}

TEST_CASE("tabulated sampler for complex poles") {
  const LevyModel m = testing::fixture("complex_pair");
  const JumpSampler s(m);
  CHECK_FALSE(s.exact());
  // E[xi] = mean(X_1) - mu per unit intensity
  std::vector<double> v;
  Rng rng = path_rng(4, 0);
  for (int i = 0; i < 400'000; ++i) v.push_back(s(rng));
  CHECK(within(mean_estimate(v), (mean(m) - m.mu) / jump_intensity(m), 3.5));
}

TEST_CASE("Brownian mean matches the moment identity") {
  LevyModel bm;
  bm.sigma = std::sqrt(2.0);
  bm.mu = -1.0;
  McConfig cfg;
  cfg.paths = 200'000;
  CHECK(within(mean_estimate(simulate_exponential_functional(bm, 2.0, cfg)), 0.5));
}

TEST_CASE("Dufresne identity: 1/I is standard exponential") {
  McConfig cfg;
  cfg.paths = 100'000;
  std::vector<double> inv;
  for (double v : simulate_exponential_functional(testing::fixture("dufresne"), 0.0, cfg))
    inv.push_back(1.0 / v);
  std::sort(inv.begin(), inv.end());
  const double n = static_cast<double>(inv.size());
  double d = 0.0;
  for (std::size_t i = 0; i < inv.size(); ++i) {
    const double f = 1.0 - std::exp(-inv[i]);
    d = std::max({d, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  CHECK(d < 1.63 / std::sqrt(n));
}

TEST_CASE("pure jump sample mean matches the first moment") {
  const LevyModel m = testing::fixture("pure_jump");
  McConfig cfg;
  cfg.paths = 200'000;
  const McSamples s = simulate_paths(m, 1.0, cfg);
  const MellinParams p = make_params(m, 1.0);
  CHECK(within(mean_estimate(s.I), moment(p, 1)));
  std::vector<double> jumps(s.jumps.begin(), s.jumps.end());
  CHECK(within(mean_estimate(s.T), 1.0));
  CHECK(within(mean_estimate(jumps), jump_intensity(m) / 1.0));
}

TEST_CASE("determinism and partition independence") {
  const LevyModel m = testing::fixture("kou");
  McConfig cfg;
  cfg.paths = 2000;
  const auto a = simulate_exponential_functional(m, 1.0, cfg);
  const auto b = simulate_exponential_functional(m, 1.0, cfg);
  CHECK(a == b);
  cfg.threads = 3;
  CHECK(simulate_exponential_functional(m, 1.0, cfg) == a);
  cfg.seed = 99;
  CHECK(simulate_exponential_functional(m, 1.0, cfg) != a);
}

TEST_CASE("halving the diffusion step moves the mean by less than one SE") {
  const LevyModel m = testing::fixture("kou");
  McConfig cfg;
  cfg.paths = 100'000;
  cfg.diffusion_step = 0.005;
  const Estimate coarse = mean_estimate(simulate_exponential_functional(m, 1.0, cfg));
  cfg.diffusion_step = 0.0025;
  const Estimate fine = mean_estimate(simulate_exponential_functional(m, 1.0, cfg));
  CHECK(std::abs(coarse.value - fine.value) < fine.std_error);
}

TEST_CASE("Mellin estimates") {
  const Estimate one = estimate_mellin({0.5, 2.0, 7.0}, 1.0);
  CHECK(one.value == 1.0);
  CHECK(one.std_error == 0.0);

  const LevyModel m = testing::fixture("kou");
  McConfig cfg;
  cfg.paths = 200'000;
  const auto s = simulate_exponential_functional(m, 1.0, cfg);
  CHECK(within(estimate_mellin(s, 1.3), mellin_transform(make_params(m, 1.0), 1.3).real()));
}

TEST_CASE("report flags a corrupted Cramer root") {
  const LevyModel m = testing::fixture("kou");
  McConfig cfg;
  cfg.paths = 100'000;
  const McSamples s = simulate_paths(m, 1.0, cfg);
  const MellinParams good = make_params(m, 1.0);
  CHECK(compare_report(s, cfg, good).all_pass());

  RootSet roots = solve(m, 1.0);
  roots.zeta[0] *= 1.1;
  const McReport bad = compare_report(s, cfg, build_params(m, 1.0, roots));
  CHECK(bad.max_abs_z() > 3.0);
  CHECK_FALSE(bad.all_pass());
}
