#pragma once

#include <span>
#include <string>

#include "levyexp/gamma.hpp"

namespace levyexp {

enum class SeriesMode { convergent, asymptotic_truncated, identically_zero, inversion };

std::string to_string(SeriesMode m);

/// Result of a series (or fallback quadrature) evaluation.
struct SeriesEval {
  cplx value = 0.0;
  double abs_err = 0.0;
  int terms_used = 0;
  SeriesMode mode = SeriesMode::convergent;
  int precision_bits = 53;  // working precision of the accepted pass
  /// abs_err does not bound the remainder of an asymptotic series: it stopped
  /// at an exact zero factor, or its terms near the cut share one phase (a
  /// Stokes line), where exponentially small contributions exceed the first
  /// omitted term.
  bool remainder_unbounded = false;
};

/// Generalized hypergeometric series pFq(u; v; z).
///
///   p <= q      entire, summed until |term| < tol |sum| three times running
///   p == q + 1  requires |z| < 1 - 1e-6, or |z| <= 1 when Re(sum v - sum u) > 1
///   p >= q + 2  asymptotic; optimal truncation at the smallest term,
///               abs_err = |first omitted term|; see remainder_unbounded
///
/// Convergent sums are repeated in wider floating point (113 up to max_bits,
/// at most 2048) while the rounding estimate exceeds tol |sum|. A series that terminates
/// (some u_i + n = 0) is summed exactly to its last term.
///
/// Throws SeriesError with kind "divergent", "term_blowup",
/// "nondecreasing_first_term", "max_terms" or "precision" (the peak term needs
/// more than max_bits).
SeriesEval hyper_pFq(std::span<const cplx> u, std::span<const cplx> v, cplx z,
                     double tol = 1e-15, int max_terms = 1'000'000, int max_bits = 2048);

}  // namespace levyexp
