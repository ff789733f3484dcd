#include "levyexp/density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "levyexp/errors.hpp"

namespace levyexp {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogUnderflow = -708.0;  // log of the smallest normal double

// Below this scaled argument the sigma > 0 density tries the asymptotic G2 first.
constexpr double kSmallY = 0.1;
// Above this scaled argument the pure-jump density tries the asymptotic G1 first.
constexpr double kLargeY = 20.0;

struct Coefficient {
  cplx log_value = 0.0;
  bool zero = false;
  double err_scale = 0.0;  // sum of max(1, |log Gamma|), for rounding estimates
};

Coefficient gamma_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den) {
  Coefficient c;
  for (const auto& z : den) {
    if (is_nonpositive_integer(z)) {
      c.zero = true;
      return c;
    }
  }
  for (const auto& z : num) {
    if (is_nonpositive_integer(z)) {
      std::ostringstream os;
      os << "G-function coefficient: numerator gamma argument " << z << " is a pole";
      throw PoleError(z, 1, os.str());
    }
    const cplx l = log_gamma(z);
    c.log_value += l;
    c.err_scale += std::max(1.0, std::abs(l));
  }
  for (const auto& z : den) {
    const cplx l = log_gamma(z);
    c.log_value -= l;
    c.err_scale += std::max(1.0, std::abs(l));
  }
  return c;
}

double parity(int k) { return (std::abs(k) % 2 == 0) ? 1.0 : -1.0; }

void fold_mode(SeriesEval& acc, const SeriesEval& f) {
  acc.terms_used += f.terms_used;
  acc.precision_bits = std::max(acc.precision_bits, f.precision_bits);
  acc.remainder_unbounded = acc.remainder_unbounded || f.remainder_unbounded;
  if (f.mode == SeriesMode::asymptotic_truncated || acc.mode == SeriesMode::identically_zero ||
      acc.mode == SeriesMode::asymptotic_truncated) {
    acc.mode = (f.mode == SeriesMode::asymptotic_truncated ||
                acc.mode == SeriesMode::asymptotic_truncated)
                   ? SeriesMode::asymptotic_truncated
                   : f.mode;
  }
}

enum class TailKind { power, call };

// The G1 sum with every power y^{-b_j - n} replaced by its integral against
// y^{s-1} (power) or (y - Y) (call) over (Y, inf).
SeriesEval G1_pass(const MellinParams& p, const GVectors& gv, double y, double tol,
                   const TailKind* kind, double s, double& magnitude, int max_bits = 2048) {
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("G1: argument must be positive and finite");
  const int K = gv.K;
  const int Q = static_cast<int>(gv.b.size());
  const int P1 = static_cast<int>(gv.a.size());
  const int Mh1 = gv.M_hat + 1;
  const cplx z = parity(p.M() - K) / y;
  const double ly = std::log(y);

  SeriesEval out;
  out.mode = SeriesMode::identically_zero;
  out.precision_bits = 53;
  for (int j = 0; j < K; ++j) {
    const cplx bj = gv.b[j];
    std::vector<cplx> num, den, u, v;
    for (int i = 0; i < K; ++i) {
      if (i != j) num.push_back(gv.b[i] - bj);
    }
    for (int i = 0; i < Mh1; ++i) num.push_back(1.0 + bj - gv.a[i]);
    for (int i = K; i < Q; ++i) den.push_back(1.0 + bj - gv.b[i]);
    for (int i = Mh1; i < P1; ++i) den.push_back(gv.a[i] - bj);
    const Coefficient c = gamma_ratio(num, den);
    if (c.zero) continue;

    for (int i = 0; i < P1; ++i) u.push_back(1.0 + bj - gv.a[i]);
    for (int i = 0; i < Q; ++i) {
      if (i != j) v.push_back(1.0 + bj - gv.b[i]);
    }
    cplx log_pre = c.log_value - bj * ly;
    if (kind != nullptr && *kind == TailKind::power) {
      u.push_back(bj - s);
      v.push_back(bj - s + 1.0);
      log_pre += s * ly - std::log(bj - s);
    } else if (kind != nullptr) {
      u.push_back(bj - 2.0);
      v.push_back(bj);
      log_pre += 2.0 * ly - std::log((bj - 1.0) * (bj - 2.0));
    }
    const SeriesEval f = hyper_pFq(u, v, z, tol, 1'000'000, max_bits);
    const cplx pre = std::exp(log_pre);
    out.value += pre * f.value;
    magnitude += std::abs(pre * f.value);
    out.abs_err += std::abs(pre) * (f.abs_err + 2.0 * kEps * std::abs(f.value) *
                                                    (c.err_scale + std::abs(log_pre)));
    if (out.mode == SeriesMode::identically_zero) out.mode = SeriesMode::convergent;
    fold_mode(out, f);
  }
  return out;
}

// Repeats a pass with a tighter series tolerance when the j-sum cancels.
template <class Pass>
SeriesEval with_cancellation_retry(double tol, Pass&& pass) {
  double magnitude = 0.0;
  SeriesEval out = pass(tol, magnitude);
  const double v = std::abs(out.value);
  if (out.mode == SeriesMode::identically_zero || !(v > 0.0)) return out;
  // Terms are truncated relative to their own size; cancellation between them
  // or an error estimate above tol |value| calls for a tighter pass.
  const double cancel = magnitude / v;
  double shrink = 1.0;
  if (cancel > 10.0 && std::isfinite(cancel)) shrink = 1.0 / cancel;
  if (out.abs_err > tol * v) shrink = std::min(shrink, 0.5 * tol * v / out.abs_err);
  if (shrink < 1.0) {
    double m2 = 0.0;
    SeriesEval again = pass(std::max(tol * shrink, 1e-300), m2);
    if (again.abs_err < out.abs_err) out = again;
  }
  return out;
}

SeriesEval G1_sum(const MellinParams& p, const GVectors& gv, double y, double tol,
                  const TailKind* kind, double s, int max_bits = 2048) {
  return with_cancellation_retry(tol, [&](double t, double& m) {
    return G1_pass(p, gv, y, t, kind, s, m, max_bits);
  });
}

bool accurate(const SeriesEval& e, double tol) {
  return e.mode != SeriesMode::identically_zero && std::isfinite(e.value.real()) &&
         std::isfinite(e.abs_err) && e.abs_err <= tol * std::abs(e.value.real());
}

// (A/G(1)) * G, discarding the imaginary residue into abs_err.
SeriesEval scale_density(const MellinParams& p, SeriesEval g) {
  const cplx fac = p.A * std::exp(-p.log_G1);
  const cplx v = fac * g.value;
  g.value = v.real();
  g.abs_err = std::abs(fac) * g.abs_err + std::abs(v.imag());
  return g;
}

SeriesEval inversion_candidate(const MellinParams& p, double x) {
  InversionOptions o;
  o.c = auto_contour(p, x);
  const InversionResult r = invert_density(p, x, o);
  SeriesEval e;
  e.value = r.value;
  e.abs_err = r.abs_err;
  e.terms_used = r.nodes;
  e.mode = SeriesMode::inversion;
  return e;
}

template <class F>
std::optional<SeriesEval> attempt(F&& f) {
  try {
    return f();
  } catch (const SeriesError&) {
    return std::nullopt;
  }
}

bool better(const SeriesEval& a, const std::optional<SeriesEval>& b) {
  if (!std::isfinite(a.abs_err) || !std::isfinite(a.value.real())) return false;
  if (!b || !std::isfinite(b->abs_err) || !std::isfinite(b->value.real())) return true;
  return a.abs_err < b->abs_err;
}

// Integration over log x using Gauss-Kronrod panels.
struct Integrator {
  const MellinParams& p;
  GVectors gv;
  DensityOptions opt;

  explicit Integrator(const MellinParams& params) : p(params), gv(build_vectors(params)) {
    opt.tol = 1e-10;
    // For mu < 0 both series still converge absolutely at the breakpoint while
    // the inversion integrand decays only polynomially.
    if (p.model_case == ModelCase::drift_only && p.model.mu < 0.0) opt.breakpoint_band = 0.0;
  }

  double breakpoint() const {
    return p.model_case == ModelCase::drift_only ? 1.0 / p.A : std::numeric_limits<double>::quiet_NaN();
  }

  // A density value below its own error bound is indistinguishable from 0; it
  // is integrated as 0 and the bound goes into the panel error, so that the
  // quadrature does not chase noise.
  QuadratureValue panel(const std::function<double(double)>& w, double u0, double u1) const {
    double noise = 0.0;
    auto f = [&](double u) {
      const double x = std::exp(u);
      const SeriesEval d = density(p, gv, x, opt);
      const double wx = w(x) * x;
      if (std::abs(d.value.real()) <= d.abs_err) {
        noise = std::max(noise, std::abs(wx) * d.abs_err);
        return 0.0;
      }
      return wx * d.value.real();
    };
    double err = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, u0, u1, 10, 1e-11, &err);
    return {v, err + noise * (u1 - u0)};
  }

  // int_{x0}^{x1}, panels of unit log width, split at the breakpoint.
  QuadratureValue range(const std::function<double(double)>& w, double x0, double x1) const {
    QuadratureValue acc;
    if (!(x1 > x0)) return acc;
    std::vector<double> cuts{std::log(x0), std::log(x1)};
    const double xb = breakpoint();
    if (std::isfinite(xb) && xb > x0 && xb < x1) cuts.insert(cuts.begin() + 1, std::log(xb));
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const int n = std::max(1, static_cast<int>(std::ceil(cuts[k + 1] - cuts[k])));
      const double du = (cuts[k + 1] - cuts[k]) / n;
      for (int i = 0; i < n; ++i) {
        const double a = cuts[k] + i * du;
        const double b = (i + 1 == n) ? cuts[k + 1] : a + du;
        const auto r = panel(w, a, b);
        acc.value += r.value;
        acc.abs_err += r.abs_err;
      }
    }
    return acc;
  }

  // int_0^{x1}: unit panels descending in log x, closed by a geometric
  // extrapolation once the panel integrals decay steadily.
  QuadratureValue from_zero(const std::function<double(double)>& w, double x1) const {
    QuadratureValue acc;
    double top = x1;
    const double xb = breakpoint();
    if (std::isfinite(xb) && xb < x1) {
      acc = range(w, xb, x1);
      top = xb;
    }
    double u = std::log(top);
    double prev = kInf;
    for (int k = 0; k < 700; ++k, u -= 1.0) {
      const auto r = panel(w, u - 1.0, u);
      acc.value += r.value;
      acc.abs_err += r.abs_err;
      if (r.value == 0.0) break;
      const double ratio = r.value / prev;
      prev = r.value;
      if (ratio > 0.0 && ratio < 0.9) {
        const double rem = r.value * ratio / (1.0 - ratio);
        if (std::abs(rem) < 1e-13 * std::abs(acc.value)) {
          acc.value += rem;
          acc.abs_err += std::abs(rem);
          break;
        }
      }
      if (u - 1.0 < -690.0) break;
    }
    return acc;
  }

  // Scaled argument from which the G1 tail series is used. For pure jumps it
  // is asymptotic on its Stokes line, so its own error estimate is not enough:
  // the density it implies must also match inversion there.
  double tail_start_y() const {
    if (p.model_case != ModelCase::pure_jump) return 2.0;
    double y = kLargeY;
    const TailKind kind = TailKind::power;
    for (int k = 0; k < 6; ++k, y *= 2.0) {
      auto e = attempt([&] { return G1_sum(p, gv, y, 1e-15, &kind, 1.0); });
      if (!e || e->abs_err > 1e-14 * std::abs(e->value)) continue;
      auto d = attempt([&] { return scale_density(p, G1(p, gv, y, 1e-15)); });
      if (!d) continue;
      const SeriesEval inv = inversion_candidate(p, y / p.A);
      const double v = std::abs(inv.value.real());
      if (std::abs(d->value.real() - inv.value.real()) <= 1e-12 * v + inv.abs_err) return y;
    }
    return y / 2.0;
  }

  // int_X^inf x^{s-1} p(x) dx
  QuadratureValue power_tail(double X, double s) const {
    const TailKind kind = TailKind::power;
    const SeriesEval e = G1_sum(p, gv, p.A * X, 1e-15, &kind, s);
    const cplx fac = std::exp((1.0 - s) * std::log(p.A) - p.log_G1);
    const cplx v = fac * e.value;
    return {v.real(), std::abs(fac) * e.abs_err + std::abs(v.imag())};
  }

  // int_K^inf (x - K) p(x) dx
  QuadratureValue call_tail(double K) const {
    const TailKind kind = TailKind::call;
    const SeriesEval e = G1_sum(p, gv, p.A * K, 1e-15, &kind, 0.0);
    const cplx fac = std::exp(-std::log(p.A) - p.log_G1);
    const cplx v = fac * e.value;
    return {v.real(), std::abs(fac) * e.abs_err + std::abs(v.imag())};
  }
};

}  // namespace

GVectors build_vectors(const MellinParams& p) {
  RootSet rs;
  rs.q = p.q;
  rs.zeta = p.zeta;
  rs.zeta_hat = p.zeta_hat;
  require_assumptions(p.model, rs);

  GVectors gv;
  gv.K = p.K();
  gv.M_hat = p.M_hat();
  gv.a.push_back(1.0);
  for (const auto& r : p.rho_hat) {
    for (int k = 0; k < r.multiplicity; ++k) gv.a.push_back(1.0 - r.location);
  }
  for (const auto& r : p.rho) {
    for (int k = 0; k < r.multiplicity; ++k) gv.a.push_back(1.0 + r.location);
  }
  for (const auto& z : p.zeta) gv.b.push_back(1.0 + z);
  for (const auto& z : p.zeta_hat) gv.b.push_back(1.0 - z);

  const auto P = p.M() + p.M_hat();
  int Q = P;
  if (p.model_case == ModelCase::diffusive) Q = P + 2;
  if (p.model_case == ModelCase::drift_only) Q = P + 1;
  if (static_cast<int>(gv.a.size()) != P + 1 || static_cast<int>(gv.b.size()) != Q) {
    throw PreconditionError("G-vector lengths do not match P + 1 and Q");
  }
  return gv;
}

SeriesEval G1(const MellinParams& p, const GVectors& gv, double y, double tol, int max_bits) {
  return G1_sum(p, gv, y, tol, nullptr, 0.0, max_bits);
}

static SeriesEval G2_pass(const MellinParams& p, const GVectors& gv, double y, double tol,
                          double& magnitude, int max_bits) {
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("G2: argument must be positive and finite");
  const int K = gv.K;
  const int Q = static_cast<int>(gv.b.size());
  const int P1 = static_cast<int>(gv.a.size());
  const int Mh1 = gv.M_hat + 1;
  const cplx z = parity(p.M_hat() - p.K_hat() - 1) * y;
  const double ly = std::log(y);

  SeriesEval out;
  out.mode = SeriesMode::identically_zero;
  for (int j = 0; j < Mh1; ++j) {
    const cplx aj = gv.a[j];
    std::vector<cplx> num, den, u, v;
    for (int i = 0; i < Mh1; ++i) {
      if (i != j) num.push_back(aj - gv.a[i]);
    }
    for (int i = 0; i < K; ++i) num.push_back(1.0 + gv.b[i] - aj);
    for (int i = Mh1; i < P1; ++i) den.push_back(1.0 + gv.a[i] - aj);
    for (int i = K; i < Q; ++i) den.push_back(aj - gv.b[i]);
    const Coefficient c = gamma_ratio(num, den);
    if (c.zero) continue;

    for (int i = 0; i < Q; ++i) u.push_back(1.0 - aj + gv.b[i]);
    for (int i = 0; i < P1; ++i) {
      if (i != j) v.push_back(1.0 - aj + gv.a[i]);
    }
    const SeriesEval f = hyper_pFq(u, v, z, tol, 1'000'000, max_bits);
    const cplx log_pre = c.log_value + (1.0 - aj) * ly;
    const cplx pre = std::exp(log_pre);
    out.value += pre * f.value;
    magnitude += std::abs(pre * f.value);
    out.abs_err += std::abs(pre) * (f.abs_err + 2.0 * kEps * std::abs(f.value) *
                                                    (c.err_scale + std::abs(log_pre)));
    if (out.mode == SeriesMode::identically_zero) out.mode = SeriesMode::convergent;
    fold_mode(out, f);
  }
  return out;
}

SeriesEval G2(const MellinParams& p, const GVectors& gv, double y, double tol, int max_bits) {
  return with_cancellation_retry(tol,
                                 [&](double t, double& m) { return G2_pass(p, gv, y, t, m, max_bits); });
}

SeriesEval density(const MellinParams& p, double x, double tol) {
  DensityOptions opt;
  opt.tol = tol;
  return density(p, build_vectors(p), x, opt);
}

SeriesEval density(const MellinParams& p, const GVectors& gv, double x, const DensityOptions& opt) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("density: x must be positive and finite");
  const double y = p.A * x;
  const double series_tol = 0.1 * opt.tol;
  const int cap = opt.series_max_bits;

  std::optional<SeriesEval> best;
  auto consider = [&](const std::optional<SeriesEval>& cand) -> bool {
    if (!cand || cand->mode == SeriesMode::identically_zero) return false;
    if (better(*cand, best)) best = cand;
    return accurate(*cand, opt.tol);
  };

  // An asymptotic expansion whose abs_err does not bound its remainder is kept
  // back until inversion has had its turn.
  std::optional<SeriesEval> deferred;
  auto asymptotic_then_exact = [&](bool asym_first, auto&& asym_fn, auto&& exact_fn) -> bool {
    std::optional<SeriesEval> asym;
    if (asym_first) {
      asym = attempt(asym_fn);
      if (asym && !asym->remainder_unbounded && consider(asym)) return true;
    }
    if (consider(attempt(exact_fn))) return true;
    if (!asym_first) asym = attempt(asym_fn);
    if (asym && asym->remainder_unbounded) {
      deferred = asym;
      return false;
    }
    return consider(asym);
  };

  switch (p.model_case) {
    case ModelCase::diffusive: {
      if (asymptotic_then_exact(
              y < kSmallY, [&] { return scale_density(p, G2(p, gv, y, series_tol)); },
              [&] { return scale_density(p, G1(p, gv, y, series_tol, cap)); })) {
        return *best;
      }
      break;
    }
    case ModelCase::drift_only: {
      if (std::abs(y - 1.0) < 1e-12) {
        std::ostringstream os;
        os << "x = " << x << " is the breakpoint 1/|mu|; use density_via_inversion or one-sided limits";
        throw BreakpointError(os.str());
      }
      if (std::abs(y - 1.0) >= opt.breakpoint_band || !opt.allow_inversion) {
        auto e = attempt([&] {
          return scale_density(p, y > 1.0 ? G1(p, gv, y, series_tol) : G2(p, gv, y, series_tol));
        });
        if (consider(e)) return *best;
      }
      break;
    }
    case ModelCase::pure_jump: {
      if (asymptotic_then_exact(
              y > kLargeY, [&] { return scale_density(p, G1(p, gv, y, series_tol)); },
              [&] { return scale_density(p, G2(p, gv, y, series_tol, cap)); })) {
        return *best;
      }
      break;
    }
  }

  if (opt.allow_inversion) {
    const SeriesEval inv = inversion_candidate(p, x);
    if (better(inv, best)) best = inv;
  }
  if (deferred && !(best && accurate(*best, opt.tol)) && better(*deferred, best)) best = deferred;
  if (!best) throw SeriesError("no_candidate", "density: no series branch or fallback succeeded");
  return *best;
}

SeriesEval density_asymptotic(const MellinParams& p, double x, Regime regime) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("density_asymptotic: x must be positive");
  const GVectors gv = build_vectors(p);
  if (regime == Regime::zero && p.model_case == ModelCase::diffusive) {
    return scale_density(p, G2(p, gv, p.A * x, 1e-16));
  }
  if (regime == Regime::infinity && p.model_case == ModelCase::pure_jump) {
    return scale_density(p, G1(p, gv, p.A * x, 1e-16));
  }
  throw PreconditionError(
      "density_asymptotic: the asymptotic branch is x -> 0 for sigma > 0 and x -> infinity for "
      "sigma = mu = 0; the requested regime has a convergent expansion for this model");
}

InversionResult invert_density(const MellinParams& p, double x, const InversionOptions& opt) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("invert_density: x must be positive");
  const double c = opt.c;
  const double left = p.continuation_left();
  if (!(c > left && c < p.strip_right())) {
    std::ostringstream os;
    os << "contour abscissa c = " << c << " outside (" << left << ", " << p.strip_right() << ")";
    throw StripError(os.str());
  }
  // Left of the strip M grows away from the saddle, so the analyticity margin
  // used by the discretization bound stays modest there.
  const double d = std::min({c - left, p.strip_right() - c, left < 0.0 ? 2.0 : kInf});
  const double dp = 0.8 * d;
  const double lx = std::log(x);
  const double logA = std::log(p.A);
  const double h = 2.0 * std::numbers::pi * dp / (37.6 + dp * std::abs(lx));

  auto log_integrand = [&](double t) -> cplx {
    const cplx s(c, t);
    const cplx lg = log_big_G(p, s);
    if (std::isinf(lg.real())) return {-kInf, 0.0};
    return (1.0 - s) * logA + log_gamma(s) + lg - p.log_G1 - s * lx;
  };

  InversionResult r;
  r.step = h;
  const cplx l0 = log_integrand(0.0);
  if (l0.real() < kLogUnderflow) {
    // The saddle envelope underflows: the density is 0 in double precision.
    r.nodes = 1;
    r.abs_err = std::exp(l0.real());
    return r;
  }
  double sum = 0.5 * std::exp(l0).real();
  const double env0 = std::exp(l0.real());
  double env_sum = 0.5 * env0;
  double round = 0.5 * env0 * kEps * (8.0 + std::abs(l0));
  double peak = env0;
  double env_prev = env0;
  std::vector<double> env_at;  // envelope at k = 8, 16, 32, ...
  double tail = kInf;
  long k = 1;
  for (;; ++k) {
    const double t = k * h;
    const cplx l = log_integrand(t);
    const double env = std::isinf(l.real()) ? 0.0 : std::exp(l.real());
    if (env > 0.0) {
      sum += std::exp(l).real();
      round += env * kEps * (8.0 + std::abs(l));
    }
    env_sum += env;
    peak = std::max(peak, env);

    const double integral = std::abs(sum * h);
    if (env < 1e-16 * peak && env < env_prev && k >= 16) {
      tail = env / h;  // the next node already lies below the truncation floor
      break;
    }
    if ((k & (k - 1)) == 0 && k >= 8) {
      env_at.push_back(env);
      if (env_at.size() >= 2) {
        const double e_half = env_at[env_at.size() - 2];
        if (env > 0.0 && e_half > env) {
          const double kappa = std::log(e_half / env) / std::log(2.0);
          tail = kappa > 1.0 ? env * t / (kappa - 1.0) : kInf;
          if (tail <= 1e-11 * integral) break;
        }
      }
    }
    env_prev = env;
    if (t >= opt.t_max || (opt.n_points > 0 && k >= opt.n_points)) {
      r.slow_convergence = !(tail <= 1e-10 * integral);
      if (!std::isfinite(tail)) tail = env * t;
      break;
    }
  }
  r.nodes = static_cast<int>(k + 1);
  r.t_end = k * h;
  const double env_integral = env_sum * h;
  const double disc = 2.0 * std::exp(-2.0 * std::numbers::pi * dp / h) *
                      (std::exp(dp * lx) + std::exp(-dp * lx)) * env_integral * 5.0;
  r.value = sum * h / std::numbers::pi;
  r.abs_err = (tail + disc + round * h) / std::numbers::pi;
  return r;
}

double density_via_inversion(const MellinParams& p, double x, double c, int n_points) {
  InversionOptions o;
  o.c = c;
  o.n_points = n_points;
  return invert_density(p, x, o).value;
}

double auto_contour(const MellinParams& p, double x) {
  const double right = p.strip_right();
  const double left = p.continuation_left();
  // With q = 0 the contour may leave the strip to the left; far out in the small-x
  // tail this is what lets inversion resolve densities far below 1e-16.
  const double lo = left == 0.0 ? 0.1 * std::min(1.0, right)
                    : std::isinf(left) ? -2000.0
                                       : left + 0.1 * std::min(1.0, -left);
  const double hi = right - 0.1 * std::min(1.0, p.theta);
  if (!(hi > lo)) return 0.5 * right;
  const double lx = std::log(x);
  auto f = [&](double c) {
    const cplx lg = log_big_G(p, c);
    const double v = (1.0 - c) * std::log(p.A) + std::lgamma(c) + lg.real() - p.log_G1.real() - c * lx;
    return std::isfinite(v) ? v : kInf;
  };
  return boost::math::tools::brent_find_minima(f, lo, hi, 30).first;
}

double tail_exponent(const MellinParams& p) { return 1.0 + p.theta; }

QuadratureValue mellin_by_quadrature(const MellinParams& p, double s) {
  if (!(s > 0.0 && s < p.strip_right())) {
    std::ostringstream os;
    os << "s = " << s << " outside the Mellin strip (0, " << p.strip_right() << ")";
    throw StripError(os.str());
  }
  const Integrator in(p);
  const double xt = in.tail_start_y() / p.A;
  const auto w = [s](double x) { return std::pow(x, s - 1.0); };
  const auto body = in.from_zero(w, xt);
  const auto tail = in.power_tail(xt, s);
  return {body.value + tail.value, body.abs_err + tail.abs_err};
}

QuadratureValue normalization(const MellinParams& p) { return mellin_by_quadrature(p, 1.0); }

QuadratureValue cdf_with_error(const MellinParams& p, double x) {
  if (!(x > 0.0)) throw DomainError("cdf: x must be positive");
  if (std::isinf(x)) return {1.0, 0.0};
  const Integrator in(p);
  const double yt = in.tail_start_y();
  QuadratureValue v;
  if (p.A * x >= yt) {
    v = in.power_tail(x, 1.0);
    v.value = 1.0 - v.value;
  } else {
    v = in.from_zero([](double) { return 1.0; }, x);
  }
  v.value = std::clamp(v.value, 0.0, 1.0);
  return v;
}

double cdf(const MellinParams& p, double x) { return cdf_with_error(p, x).value; }

QuadratureValue price_with_error(const MellinParams& p, double strike) {
  if (!(strike >= 0.0) || !std::isfinite(strike)) throw DomainError("price_asian: strike must be >= 0");
  if (!(p.q > 0.0)) throw PreconditionError("price_asian requires q > 0");
  if (!(p.theta > 1.0)) {
    std::ostringstream os;
    os << "E[I_q] is infinite (zeta_1 = " << p.theta << " <= 1), so the price is infinite";
    throw InfinitePriceError(os.str());
  }
  if (strike == 0.0) {
    const double m = moment(p, 1);
    return {m, 4.0 * kEps * m};
  }
  const Integrator in(p);
  const double xt = in.tail_start_y() / p.A;
  if (strike >= xt) return in.call_tail(strike);
  const auto body = in.range([strike](double x) { return x - strike; }, strike, xt);
  const auto t2 = in.power_tail(xt, 2.0);
  const auto t1 = in.power_tail(xt, 1.0);
  return {body.value + t2.value - strike * t1.value,
          body.abs_err + t2.abs_err + strike * t1.abs_err};
}

double price_asian(const MellinParams& p, double strike) { return price_with_error(p, strike).value; }

BreakpointLimits breakpoint_limits(const MellinParams& p, double delta) {
  if (p.model_case != ModelCase::drift_only) {
    throw PreconditionError("breakpoint_limits: only the sigma = 0, mu != 0 case has a breakpoint");
  }
  if (!(delta > 0.0 && delta < 0.1)) throw DomainError("breakpoint_limits: delta must be in (0, 0.1)");
  const GVectors gv = build_vectors(p);
  BreakpointLimits b;
  b.x = 1.0 / p.A;
  // Quadratic extrapolation from offsets delta, 2 delta and 3 delta on each side.
  auto one_sided = [&](double sign) {
    SeriesEval e[3];
    for (int k = 0; k < 3; ++k) {
      const double y = 1.0 + sign * (k + 1) * delta;
      e[k] = scale_density(p, sign > 0 ? G1(p, gv, y, 1e-12) : G2(p, gv, y, 1e-12));
    }
    SeriesEval out = e[0];
    out.value = 3.0 * e[0].value - 3.0 * e[1].value + e[2].value;
    out.abs_err = 3.0 * e[0].abs_err + 3.0 * e[1].abs_err + e[2].abs_err;
    out.terms_used = e[0].terms_used + e[1].terms_used + e[2].terms_used;
    return out;
  };
  b.left = one_sided(-1.0);
  b.right = one_sided(1.0);
  const double l = b.left.value.real();
  const double r = b.right.value.real();
  b.rel_gap = std::abs(l - r) / std::max(std::abs(l), std::abs(r));
  return b;
}

}  // namespace levyexp
