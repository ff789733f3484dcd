#pragma once

#include <complex>
#include <string>
#include <vector>

#include "levyexp/gamma.hpp"

namespace levyexp {

/// One exponential-polynomial block of the jump density:
///   sum_i alphas[i-1] * |x|^{i-1} * exp(-rho |x|).
/// The multiplicity is alphas.size(); the last alpha must be nonzero.
struct JumpTerm {
  cplx rho;
  std::vector<cplx> alphas;

  int multiplicity() const noexcept { return static_cast<int>(alphas.size()); }
};

/// X_t = sigma W_t + mu t + compound Poisson jumps with density pi(x).
struct LevyModel {
  double sigma = 0.0;
  double mu = 0.0;
  std::vector<JumpTerm> positive_jumps;
  std::vector<JumpTerm> negative_jumps;

  /// M: positive-side poles counted with multiplicity.
  int positive_pole_count() const noexcept;
  /// M-hat: negative-side poles counted with multiplicity.
  int negative_pole_count() const noexcept;
  bool has_jumps() const noexcept { return !positive_jumps.empty() || !negative_jumps.empty(); }
};

/// Which of the three degree regimes the model falls in.
enum class ModelCase { diffusive, drift_only, pure_jump };

ModelCase model_case(const LevyModel& model) noexcept;
const char* to_string(ModelCase c) noexcept;

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(const std::string& code) const;
};

/// Checks every structural invariant plus nonnegativity of pi(x) on a
/// log-spaced grid of 2000 points per side over [1e-6, 50 / min Re(rho)].
ValidationReport validate(const LevyModel& model);

/// Throws ModelError listing the violations if `validate` fails.
void require_valid(const LevyModel& model);

/// Levy density pi(x), x != 0.
double levy_density(const LevyModel& model, double x);

/// lambda = integral of pi over the real line.
double jump_intensity(const LevyModel& model);

/// psi(z) = log E[exp(z X_1)] in partial-fraction form.
/// Throws PoleError within 1e-10 (1 + |pole|) of a pole.
cplx laplace_exponent(const LevyModel& model, cplx z);

/// psi'(z).
cplx laplace_exponent_derivative(const LevyModel& model, cplx z);

/// E[X_1] = psi'(0).
double mean(const LevyModel& model);

/// Poles of psi with multiplicities: rho_j (positive side) and -rho_hat_j.
struct Pole {
  cplx location;
  int multiplicity;
};
std::vector<Pole> poles(const LevyModel& model);

}  // namespace levyexp
