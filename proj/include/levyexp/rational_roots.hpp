#pragma once

#include <string>
#include <vector>

#include "levyexp/levy_model.hpp"
#include "levyexp/polynomial.hpp"

namespace levyexp {

/// psi(z) = num(z) / den(z) with den(z) = prod (rho_j - z)^{m_j} prod (rho_hat_j + z)^{m_hat_j}.
struct RationalForm {
  Polynomial num;  // Q(z)
  Polynomial den;  // P(z)
  ModelCase relation = ModelCase::pure_jump;  // deg Q = deg P + 2, + 1 or + 0

  int num_degree() const noexcept { return num.degree(); }
  int den_degree() const noexcept { return den.degree(); }
};

RationalForm to_rational(const LevyModel& model);

/// Zeros of psi(z) - q split by half-plane. zeta_hat stores the positive
/// quantities, i.e. the roots themselves are -zeta_hat[j]. Both lists are
/// sorted by ascending real part (ties by imaginary part).
struct RootSet {
  double q = 0.0;
  std::vector<cplx> zeta;
  std::vector<cplx> zeta_hat;

  int K() const noexcept { return static_cast<int>(zeta.size()); }
  int K_hat() const noexcept { return static_cast<int>(zeta_hat.size()); }
};

/// Expected (K, K_hat) for the model's degree regime.
std::pair<int, int> expected_root_counts(const LevyModel& model);

/// Solves psi(z) = q. Requires q > 0, or q = 0 with E[X_1] < 0; the zero root
/// of the q = 0 problem is reported as zeta_hat_1 = 0.
/// Throws MultipleRootError, CountLawError or PreconditionError.
RootSet solve(const LevyModel& model, double q);

/// theta = zeta_1, the right edge of the Mellin strip is 1 + theta.
double cramer_abscissa(const RootSet& roots);

struct AssumptionCheck {
  std::string id;       // "A.1" .. "A.5"
  bool passed = true;
  bool warning = false;  // within the 1e-4 near-integer band
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;

  bool all_passed() const noexcept;
  /// Ids of the failed checks, comma separated.
  std::string failures() const;
};

AssumptionReport check_assumptions(const LevyModel& model, const RootSet& roots);

/// Throws AssumptionError naming the failed assumptions.
void require_assumptions(const LevyModel& model, const RootSet& roots);

}  // namespace levyexp
