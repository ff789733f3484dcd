#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "levyexp/io.hpp"
#include "levyexp/levy_model.hpp"
#include "levyexp/mellin.hpp"

namespace testing {

using levyexp::cplx;
using levyexp::LevyModel;

inline std::string fixture_path(const std::string& name) {
  return std::string(LEVYEXP_FIXTURE_DIR) + "/" + name + ".json";
}

inline LevyModel fixture(const std::string& name) { return levyexp::load_model(fixture_path(name)); }

struct Fixture {
  std::string name;
  double q;
};

/// sigma > 0, sigma = 0 with mu > 0 and mu < 0, sigma = mu = 0, a multiplicity-2
/// positive jump and a complex-conjugate rho pair.
inline const std::vector<Fixture>& core_fixtures() {
  static const std::vector<Fixture> f = {{"kou", 1.0},     {"drift_up", 1.0}, {"drift_down", 1.0},
                                         {"pure_jump", 1.0}, {"erlang2", 0.5}, {"complex_pair", 1.5}};
  return f;
}

/// The core set plus the two Brownian closed-form cases.
inline const std::vector<Fixture>& all_fixtures() {
  static const std::vector<Fixture> f = [] {
    std::vector<Fixture> v = {{"dufresne", 0.0}, {"bm_q2", 2.0}};
    v.insert(v.end(), core_fixtures().begin(), core_fixtures().end());
    return v;
  }();
  return f;
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Uniform point of the open strip 0 < Re s < hi, |Im s| <= im.
inline cplx random_s(std::mt19937_64& rng, double hi, double im) {
  std::uniform_real_distribution<double> re(0.02 * hi, 0.98 * hi), ii(-im, im);
  return {re(rng), ii(rng)};
}

enum class RandomCase { diffusive, drift_up, drift_down, pure_jump };

/// Random model of the given case with real rho and positive alphas, so that
/// pi(x) >= 0; about one draw in four carries a multiplicity-2 term.
inline LevyModel random_model(std::mt19937_64& rng, RandomCase c) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * u01(rng); };
  LevyModel m;
  if (c == RandomCase::diffusive) {
    m.sigma = uni(0.1, 2.0);
    m.mu = uni(-1.0, 1.0);
  } else if (c == RandomCase::drift_up) {
    m.mu = uni(0.05, 2.0);
  } else if (c == RandomCase::drift_down) {
    m.mu = -uni(0.05, 2.0);
  }
  auto side = [&](std::vector<levyexp::JumpTerm>& terms, int n) {
    for (int j = 0; j < n; ++j) {
      levyexp::JumpTerm t;
      t.rho = uni(0.3, 6.0) + 1.7 * j;
      t.alphas.push_back(uni(0.1, 3.0));
      if (u01(rng) < 0.25) t.alphas.push_back(uni(0.1, 3.0));
      terms.push_back(std::move(t));
    }
  };
  std::uniform_int_distribution<int> count(c == RandomCase::pure_jump ? 1 : 0, 2);
  side(m.positive_jumps, count(rng));
  side(m.negative_jumps, count(rng));
  if (c == RandomCase::pure_jump && (m.positive_jumps.empty() || m.negative_jumps.empty())) {
    // Pure jumps need both sides for a nondegenerate killed functional.
    if (m.positive_jumps.empty()) side(m.positive_jumps, 1);
    if (m.negative_jumps.empty()) side(m.negative_jumps, 1);
  }
  return m;
}

}  // namespace testing
