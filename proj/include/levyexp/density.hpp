#pragma once

#include <vector>

#include "levyexp/hypergeometric.hpp"
#include "levyexp/mellin.hpp"

namespace levyexp {

/// Parameter vectors of the Meijer-G representation of the density.
///   a = [1, 1 - rho_hat_1, ..., 1 - rho_hat_Mh, [1 + rho_j]_{m_j} ...]   (length P + 1)
///   b = [1 + zeta_1, ..., 1 + zeta_K, 1 - zeta_hat_1, ..., 1 - zeta_hat_Kh] (length Q)
struct GVectors {
  std::vector<cplx> a;
  std::vector<cplx> b;
  int K = 0;      // b[0..K) belong to the right half-plane roots
  int M_hat = 0;  // a[0..M_hat] are the leading block used by G2
};

/// Throws AssumptionError unless A.1-A.5 all hold.
GVectors build_vectors(const MellinParams& p);

/// Large-argument expansion, summed over j < K. `y` is the scaled argument A x.
/// `max_bits` caps the working precision of each hypergeometric sum.
SeriesEval G1(const MellinParams& p, const GVectors& gv, double y, double tol = 1e-12,
              int max_bits = 2048);

/// Small-argument expansion, summed over j <= M_hat. Returns identically_zero when
/// every coefficient vanishes.
SeriesEval G2(const MellinParams& p, const GVectors& gv, double y, double tol = 1e-12,
              int max_bits = 2048);

struct DensityOptions {
  double tol = 1e-10;
  /// Relative half-width around x = 1/|mu| (drift-only case) handed to inversion.
  double breakpoint_band = 0.02;
  bool allow_inversion = true;
  /// Precision cap for the exact series before falling back; inversion is far
  /// cheaper than a 1024-bit sum that cancels across the j index anyway.
  int series_max_bits = 512;
};

/// p(x) with the case dispatch:
///   sigma > 0      (A/G(1)) G1(A x); asymptotic G2 first for A x < 0.1
///   sigma = 0      G1 for A x > 1, G2 for A x < 1; A x == 1 throws BreakpointError
///   sigma = mu = 0 (A/G(1)) G2(A x); asymptotic G1 first for A x > 20
/// An asymptotic candidate goes first only when its remainder is bounded: a
/// terminating expansion, or an optimally truncated one on a Stokes line (terms
/// of one sign), only estimates its error and is kept as a last resort after
/// inversion.
/// A candidate is accepted when abs_err <= tol |value|; otherwise the next one is
/// tried, ending with Mellin inversion (mode inversion). The most accurate
/// candidate is returned.
SeriesEval density(const MellinParams& p, double x, double tol = 1e-10);
SeriesEval density(const MellinParams& p, const GVectors& gv, double x,
                   const DensityOptions& opt = {});

enum class Regime { zero, infinity };

/// The asymptotic branch alone: regime zero for sigma > 0 (G2), regime infinity
/// for sigma = mu = 0 (G1). Throws PreconditionError for any other pairing.
SeriesEval density_asymptotic(const MellinParams& p, double x, Regime regime);

struct InversionOptions {
  double c = 1.0;        // contour abscissa, inside (0, 1 + theta)
  int n_points = 0;      // > 0 fixes the node count on t >= 0, else automatic
  double t_max = 1e5;    // hard truncation for slowly decaying integrands
};

struct InversionResult {
  double value = 0.0;
  double abs_err = 0.0;
  int nodes = 0;
  double step = 0.0;
  double t_end = 0.0;
  bool slow_convergence = false;  // stopped at t_max with a non-negligible tail
};

/// p(x) = (1/pi) int_0^inf Re[M(c + it) x^{-c-it}] dt by the trapezoid rule.
InversionResult invert_density(const MellinParams& p, double x, const InversionOptions& opt = {});
double density_via_inversion(const MellinParams& p, double x, double c = 1.0, int n_points = 0);

/// Contour abscissa minimising x^{-c} M(c) over the strip, kept away from its edges.
double auto_contour(const MellinParams& p, double x);

struct QuadratureValue {
  double value = 0.0;
  double abs_err = 0.0;
};

/// P(I_q <= x).
double cdf(const MellinParams& p, double x);
QuadratureValue cdf_with_error(const MellinParams& p, double x);

/// 1 + zeta_1: p(x) ~ C x^{-(1 + zeta_1)} as x -> infinity.
double tail_exponent(const MellinParams& p);

/// E[(I_q - K)^+]; requires q > 0 and zeta_1 > 1 (InfinitePriceError otherwise).
double price_asian(const MellinParams& p, double strike);
QuadratureValue price_with_error(const MellinParams& p, double strike);

/// int_0^inf x^{s-1} p(x) dx by quadrature plus an exact series tail.
QuadratureValue mellin_by_quadrature(const MellinParams& p, double s);

/// int_0^inf p(x) dx.
QuadratureValue normalization(const MellinParams& p);

/// One-sided values at the drift-only breakpoint x = 1/|mu|.
struct BreakpointLimits {
  double x = 0.0;
  SeriesEval left;   // G2 extrapolated from A x = 1 - k delta, k = 1, 2, 3
  SeriesEval right;  // G1 extrapolated from A x = 1 + k delta, k = 1, 2, 3
  double rel_gap = 0.0;
};

/// Throws PreconditionError unless sigma = 0 and mu != 0.
BreakpointLimits breakpoint_limits(const MellinParams& p, double delta = 5e-3);

}  // namespace levyexp
