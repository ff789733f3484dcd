#pragma once

#include <vector>

#include "levyexp/levy_model.hpp"
#include "levyexp/rational_roots.hpp"

namespace levyexp {

/// Everything needed to evaluate E[I_q^{s-1}] for one (model, q).
struct MellinParams {
  LevyModel model;
  ModelCase model_case = ModelCase::pure_jump;
  double q = 0.0;
  double lambda = 0.0;
  double A = 1.0;      // scale constant of the Mellin transform
  double theta = 0.0;  // zeta_1; the strip is 0 < Re(s) < 1 + theta
  std::vector<cplx> zeta;
  std::vector<cplx> zeta_hat;
  std::vector<Pole> rho;      // positive-side poles rho_j, multiplicity m_j
  std::vector<Pole> rho_hat;  // negative-side poles stored positive, multiplicity m_hat_j
  cplx log_G1 = 0.0;          // log G(1)

  int K() const noexcept { return static_cast<int>(zeta.size()); }
  int K_hat() const noexcept { return static_cast<int>(zeta_hat.size()); }
  int M() const noexcept;
  int M_hat() const noexcept;
  double strip_right() const noexcept { return 1.0 + theta; }
  /// Left edge of the analytic continuation of M(s): 0 when q > 0 (pole of
  /// Gamma(s)); for q = 0 the root at 0 cancels every pole of Gamma(s) and the
  /// first singularity is at -min Re rho_hat, or none at all (-inf).
  double continuation_left() const noexcept;
};

/// A = sigma^2/2, |mu| or q + lambda according to the degree regime.
double scale_constant(const LevyModel& model, double q);

/// Builds the parameter block from a solved root set.
MellinParams build_params(const LevyModel& model, double q, const RootSet& roots);

/// Convenience: validate, solve and build in one step.
MellinParams make_params(const LevyModel& model, double q);

/// log G(s). Returns real part -inf when a denominator gamma sits on a pole
/// (G vanishes there); throws PoleError for a numerator pole.
cplx log_big_G(const MellinParams& p, cplx s);

/// E[I_q^{s-1}] for 0 < Re(s) < 1 + theta; throws StripError outside.
cplx mellin_transform(const MellinParams& p, cplx s);

/// E[exp(u X_{e(q)}) I_q^{s-1}], q > 0, -zeta_hat_1 < Re(u) < zeta_1,
/// 0 < Re(s) < 1 + zeta_1 - Re(u).
cplx joint_transform(const MellinParams& p, cplx u, cplx s);

/// E[I_q^n] for integer 1 <= n < theta; throws MomentError otherwise.
double moment(const MellinParams& p, int n);

/// s / (q - psi(s)) evaluated from the model directly.
cplx recurrence_ratio(const MellinParams& p, cplx s);

/// The same ratio from its pole/zero factorisation,
///   (-1)^{K-M} (s/A) prod (s - rho_j)^{m_j} prod (s + rho_hat_j)^{m_hat_j}
///                  / (prod (s - zeta_j) prod (s + zeta_hat_j)).
cplx recurrence_ratio_factorized(const MellinParams& p, cplx s);

}  // namespace levyexp
