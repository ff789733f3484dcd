#include "levyexp/hypergeometric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "levyexp/errors.hpp"

namespace levyexp {
namespace {

namespace mp = boost::multiprecision;

template <unsigned Bits>
using MpComplex = mp::cpp_complex<Bits, mp::backends::digit_base_2>;

constexpr int kSmallRun = 3;
constexpr int kPrecisionLevels[] = {53, 64, 113, 256, 512, 1024, 2048};

// Index n at which u + n == 0, if u is (numerically) a non-positive integer.
std::optional<long> vanishing_index(cplx u) {
  if (!is_nonpositive_integer(u, 1e-12 * (1.0 + std::abs(u)))) return std::nullopt;
  return static_cast<long>(std::lround(-u.real()));
}

// log2 of the largest term magnitude, scanned in double with log-magnitudes so
// that it never overflows. The scan stops once the terms have fallen 60 bits
// below the peak, or as soon as the peak exceeds `cap`.
double log2_peak_term(std::span<const cplx> u, std::span<const cplx> v, cplx z, long max_terms,
                      std::optional<long> last, double cap) {
  const double lz = std::log2(std::abs(z));
  double lt = 0.0, peak = 0.0;
  for (long n = 0; n < max_terms; ++n) {
    if (last && n >= *last) break;
    double step = lz - std::log2(static_cast<double>(n + 1));
    for (const auto& a : u) step += std::log2(std::abs(a + static_cast<double>(n)));
    for (const auto& b : v) step -= std::log2(std::abs(b + static_cast<double>(n)));
    lt += step;
    peak = std::max(peak, lt);
    if (peak > cap || (step < 0.0 && lt < peak - 60.0)) break;
  }
  return peak;
}

struct PassResult {
  cplx value;
  double trunc_err = 0.0;  // absolute
  double round_err = 0.0;  // absolute
  double rel_round = 0.0;  // round_err / |sum| evaluated in working precision
  int terms = 0;
  bool finite = true;
};

template <class C>
cplx to_cplx(const C& c) {
  using std::imag;
  using std::real;
  return {static_cast<double>(real(c)), static_cast<double>(imag(c))};
}

// One pass of a convergent (or terminating) series in the floating type C.
template <class C>
PassResult sum_convergent(std::span<const cplx> u_in, std::span<const cplx> v_in, cplx z_in,
                          double tol, long max_terms, std::optional<long> last_index) {
  using std::abs;
  using std::sqrt;
  using R = std::decay_t<decltype(abs(std::declval<C>()))>;

  std::vector<C> u, v;
  for (const auto& x : u_in) u.emplace_back(x.real(), x.imag());
  for (const auto& x : v_in) v.emplace_back(x.real(), x.imag());
  const C z(z_in.real(), z_in.imag());
  const double weight_step = static_cast<double>(u.size() + v.size() + 3);

  C term(1.0);
  C sum(1.0);
  R abs_weighted(1.0);
  R mag_prev(1.0);
  R tail(0.0);
  int small_run = 0;
  long n = 0;
  for (;; ++n) {
    if (last_index && n >= *last_index) break;
    if (n >= max_terms) {
      std::ostringstream os;
      os << "hypergeometric series exceeded " << max_terms << " terms";
      throw SeriesError("max_terms", os.str());
    }
    C num(1.0), den(static_cast<double>(n + 1));
    for (const auto& a : u) num *= a + R(n);
    for (const auto& b : v) den *= b + R(n);
    term = term * num / den * z;
    sum += term;
    const R mag = abs(term);
    const R mag_sum = abs(sum);
    abs_weighted += mag * (1.0 + std::sqrt(static_cast<double>(n + 2)) * weight_step);
    if constexpr (std::is_floating_point_v<R>) {
      if (!std::isfinite(mag) || !std::isfinite(mag_sum)) {
        PassResult bad;
        bad.finite = false;
        bad.terms = static_cast<int>(n + 2);
        return bad;
      }
    }
    if (mag < R(tol) * mag_sum || mag == 0) {
      ++small_run;
    } else {
      small_run = 0;
    }
    if (small_run >= kSmallRun) {
      // Geometric tail estimate from the last term ratio.
      const R ratio = mag_prev > 0 ? R(mag / mag_prev) : R(0.0);
      if (ratio < R(1.0)) {
        tail = mag * ratio / (R(1.0) - ratio);
        if (tail <= R(tol) * mag_sum || mag == 0) break;
      }
    }
    mag_prev = mag;
  }

  PassResult r;
  r.terms = static_cast<int>(n + 1);
  r.value = to_cplx(sum);
  if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag())) {
    r.finite = false;
    return r;
  }
  const R eps = std::numeric_limits<R>::epsilon();
  const R round = eps * abs_weighted;
  const R mag_sum = abs(sum);
  r.round_err = static_cast<double>(round);
  r.trunc_err = static_cast<double>(tail);
  r.rel_round = mag_sum > 0 ? static_cast<double>(R(round / mag_sum))
                            : std::numeric_limits<double>::infinity();
  return r;
}

PassResult sum_at_precision_unguarded(int bits, std::span<const cplx> u, std::span<const cplx> v,
                                      cplx z, double tol, long max_terms, std::optional<long> last) {
  switch (bits) {
    case 53: return sum_convergent<cplx>(u, v, z, tol, max_terms, last);
    case 64: return sum_convergent<std::complex<long double>>(u, v, z, tol, max_terms, last);
    case 113: return sum_convergent<mp::complex128>(u, v, z, tol, max_terms, last);
    case 256: return sum_convergent<MpComplex<256>>(u, v, z, tol, max_terms, last);
    case 512: return sum_convergent<MpComplex<512>>(u, v, z, tol, max_terms, last);
    case 1024: return sum_convergent<MpComplex<1024>>(u, v, z, tol, max_terms, last);
    default: return sum_convergent<MpComplex<2048>>(u, v, z, tol, max_terms, last);
  }
}

PassResult sum_at_precision(int bits, std::span<const cplx> u, std::span<const cplx> v, cplx z,
                            double tol, long max_terms, std::optional<long> last) {
  try {
    return sum_at_precision_unguarded(bits, u, v, z, tol, max_terms, last);
  } catch (const std::overflow_error&) {
    // float128 reports exponent overflow by throwing; treat it like a non-finite pass.
    PassResult bad;
    bad.finite = false;
    return bad;
  }
}

SeriesEval sum_asymptotic(std::span<const cplx> u, std::span<const cplx> v, cplx z, double tol,
                          long max_terms) {
  cplx term = 1.0;
  cplx sum = 1.0;
  double mag_prev = 1.0;
  double abs_total = 1.0;
  int small_run = 0;
  long n = 0;
  double omitted = 0.0;
  cplx ratio = 0.0;
  for (;; ++n) {
    if (n >= max_terms) throw SeriesError("max_terms", "asymptotic series exceeded the term cap");
    cplx num = 1.0, den = static_cast<double>(n + 1);
    for (const auto& a : u) num *= a + static_cast<double>(n);
    for (const auto& b : v) den *= b + static_cast<double>(n);
    const cplx next = term * num / den * z;
    const double mag = std::abs(next);
    ratio = num / den * z;
    if (n == 0 && !(mag < mag_prev)) {
      std::ostringstream os;
      os << "asymptotic series at z = " << z << " has |t1| = " << mag << " >= |t0| = 1";
      throw SeriesError("nondecreasing_first_term", os.str());
    }
    if (!(mag < mag_prev)) {
      omitted = mag;
      break;
    }
    term = next;
    sum += term;
    abs_total += mag;
    small_run = (mag < tol * std::abs(sum)) ? small_run + 1 : 0;
    if (small_run >= kSmallRun || mag == 0.0) {
      omitted = mag;
      ++n;
      break;
    }
    mag_prev = mag;
  }
  SeriesEval r;
  r.value = sum;
  r.terms_used = static_cast<int>(n + 1);
  r.mode = SeriesMode::asymptotic_truncated;
  r.abs_err = omitted + 4.0 * std::numeric_limits<double>::epsilon() * abs_total;
  r.remainder_unbounded = std::abs(std::arg(ratio)) < std::numbers::pi / 4;
  return r;
}

}  // namespace

std::string to_string(SeriesMode m) {
  switch (m) {
    case SeriesMode::convergent: return "convergent";
    case SeriesMode::asymptotic_truncated: return "asymptotic_truncated";
    case SeriesMode::identically_zero: return "identically_zero";
    case SeriesMode::inversion: return "inversion";
  }
  return "unknown";
}

SeriesEval hyper_pFq(std::span<const cplx> u, std::span<const cplx> v, cplx z, double tol,
                     int max_terms, int max_bits) {
  if (!(tol > 0.0)) throw DomainError("hyper_pFq: tol must be positive");

  std::optional<long> last;  // the series stops after term index *last
  for (const auto& a : u) {
    if (auto k = vanishing_index(a)) last = last ? std::min(*last, *k) : *k;
  }
  for (const auto& b : v) {
    if (auto k = vanishing_index(b); k && (!last || *k < *last)) {
      std::ostringstream os;
      os << "hypergeometric lower parameter " << b << " is a non-positive integer";
      throw SeriesError("term_blowup", os.str());
    }
  }

  const std::size_t p = u.size();
  const std::size_t q = v.size();
  if (z == cplx(0.0)) return {1.0, 0.0, 1, SeriesMode::convergent, 53};

  if (!last && p >= q + 2) return sum_asymptotic(u, v, z, tol, max_terms);
  // On the unit circle p = q + 1 still converges absolutely when the terms decay
  // like n^{-(1 + excess)}; a margin of 1 keeps the term count moderate.
  cplx excess = 0.0;
  for (const auto& b : v) excess += b;
  for (const auto& a : u) excess -= a;
  const bool unit_ok = std::abs(z) <= 1.0 + 1e-14 && excess.real() > 1.0;
  if (!last && p == q + 1 && !(std::abs(z) < 1.0 - 1e-6) && !unit_ok) {
    std::ostringstream os;
    os << p << "F" << q << " series diverges at |z| = " << std::abs(z);
    throw SeriesError("divergent", os.str());
  }

  // The sum needs about log2(peak) + log2(1/tol) bits when the terms cancel down
  // to O(1). Beyond the top precision level the result is unreachable, and a
  // result above 2^1024 is not representable either way.
  int top = kPrecisionLevels[0];
  for (int level : kPrecisionLevels) {
    if (level <= max_bits) top = level;
  }
  const double reachable = top + std::log2(tol) - 8.0;
  const double peak = log2_peak_term(u, v, z, max_terms, last, reachable);
  if (peak > reachable) {
    std::ostringstream os;
    os << "hypergeometric terms reach 2^" << peak << ", beyond " << top << "-bit working precision";
    throw SeriesError("precision", os.str());
  }
  int bits = 53;
  if (peak > 1000.0) {
    for (int level : kPrecisionLevels) {
      if (level >= peak && level <= top) {
        bits = level;
        break;
      }
    }
  }

  PassResult best;
  int best_bits = 0;
  for (;;) {
    PassResult r = sum_at_precision(bits, u, v, z, tol, max_terms, last);
    if (r.finite) {
      best = r;
      best_bits = bits;
      if (r.rel_round <= tol) break;
    }
    const double need = r.finite && std::isfinite(r.rel_round)
                            ? bits + std::log2(r.rel_round / tol) + 6.0
                            : 2.0 * bits;
    int next = 0;
    for (int level : kPrecisionLevels) {
      if (level > bits && level <= top && level >= need) {
        next = level;
        break;
      }
    }
    // The estimate from a noisy pass understates the need, so a need above the
    // top level means the top level cannot succeed either.
    if (next == 0 && !(r.finite && std::isfinite(r.rel_round))) {
      next = bits < top ? top : 0;
    }
    if (next == 0 || next == bits) break;
    bits = next;
  }
  if (best_bits == 0) throw SeriesError("overflow", "hypergeometric series overflowed");

  SeriesEval out;
  out.value = best.value;
  out.abs_err = best.trunc_err + best.round_err;
  out.terms_used = best.terms;
  // A terminating series in the divergent regime is still only an asymptotic
  // expansion: exponentially small contributions are not represented.
  out.mode = p >= q + 2 ? SeriesMode::asymptotic_truncated : SeriesMode::convergent;
  out.precision_bits = best_bits;
  out.remainder_unbounded = p >= q + 2;
  return out;
}

}  // namespace levyexp
