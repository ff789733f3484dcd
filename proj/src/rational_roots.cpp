#include "levyexp/rational_roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyexp/errors.hpp"

namespace levyexp {
namespace {

constexpr double kMultipleRoot = 1e-6;
constexpr double kRealSnap = 1e-8;
constexpr double kIntegerTol = 1e-8;
constexpr double kIntegerWarn = 1e-4;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Factor of the denominator belonging to one jump term.
Polynomial pole_factor(const JumpTerm& t, bool positive_side) {
  return positive_side ? Polynomial::linear(t.rho, -1.0) : Polynomial::linear(t.rho, 1.0);
}

cplx polish(const LevyModel& model, cplx r, double q) {
  try {
    cplx f = laplace_exponent(model, r) - q;
    for (int it = 0; it < 8 && f != cplx(0.0); ++it) {
      const cplx step = f / laplace_exponent_derivative(model, r);
      if (!std::isfinite(step.real()) || std::abs(step) > 1e-2 * (1.0 + std::abs(r))) break;
      const cplx cand = r - step;
      const cplx fc = laplace_exponent(model, cand) - q;
      if (std::abs(fc) >= std::abs(f)) break;
      r = cand;
      f = fc;
    }
  } catch (const PoleError&) {
    // Within the pole guard band: keep the polynomial root as is.
  }
  return r;
}

// Distance of w from the nearest integer with |n| >= 1, or +inf.
double distance_to_nonzero_integer(cplx w) {
  const double n = std::round(w.real());
  if (n == 0.0) return std::abs(w - 1.0) < std::abs(w + 1.0) ? std::abs(w - 1.0) : std::abs(w + 1.0);
  return std::abs(w - cplx(n, 0.0));
}

double distance_to_natural(cplx w) {
  const double n = std::max(1.0, std::round(w.real()));
  return std::abs(w - cplx(n, 0.0));
}

bool lex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

void sort_and_snap(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), lex_less);
  // Conjugate partners get identical real parts after symmetrisation, so the
  // ordering is stable; snap exact real roots.
  for (auto& r : v) {
    if (std::abs(r.imag()) < kRealSnap) r = {r.real(), 0.0};
  }
}

}  // namespace

RationalForm to_rational(const LevyModel& model) {
  const double lam = jump_intensity(model);
  std::vector<Polynomial> factors;
  std::vector<int> mult;
  std::vector<const JumpTerm*> terms;
  for (const auto& t : model.positive_jumps) {
    factors.push_back(pole_factor(t, true));
    mult.push_back(t.multiplicity());
    terms.push_back(&t);
  }
  for (const auto& t : model.negative_jumps) {
    factors.push_back(pole_factor(t, false));
    mult.push_back(t.multiplicity());
    terms.push_back(&t);
  }

  Polynomial den = Polynomial::constant(1.0);
  for (std::size_t j = 0; j < factors.size(); ++j) den = den * factors[j].pow(mult[j]);

  const double s2 = 0.5 * model.sigma * model.sigma;
  Polynomial num = Polynomial({-lam, model.mu, s2}) * den;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    Polynomial others = Polynomial::constant(1.0);
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (k != j) others = others * factors[k].pow(mult[k]);
    }
    for (int i = 1; i <= mult[j]; ++i) {
      const cplx c = terms[j]->alphas[i - 1] * factorial(i - 1);
      num = num + c * (factors[j].pow(mult[j] - i) * others);
    }
  }
  return {std::move(num), std::move(den), model_case(model)};
}

std::pair<int, int> expected_root_counts(const LevyModel& model) {
  const int M = model.positive_pole_count();
  const int Mh = model.negative_pole_count();
  switch (model_case(model)) {
    case ModelCase::diffusive: return {M + 1, Mh + 1};
    case ModelCase::drift_only: return model.mu > 0.0 ? std::pair{M + 1, Mh} : std::pair{M, Mh + 1};
    case ModelCase::pure_jump: return {M, Mh};
  }
  return {M, Mh};
}

RootSet solve(const LevyModel& model, double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw PreconditionError("solve: q must be finite and >= 0");
  const double drift = mean(model);
  if (q == 0.0 && !(drift < 0.0)) {
    std::ostringstream os;
    os << "q = 0 requires E[X_1] < 0 (process drifting to -infinity); E[X_1] = " << drift;
    throw PreconditionError(os.str());
  }

  const auto rf = to_rational(model);
  Polynomial target = rf.num - q * rf.den;
  if (q == 0.0) {
    // psi(0) = 0 exactly: divide the root at the origin out before solving.
    std::vector<cplx> c(target.coeffs().begin(), target.coeffs().end());
    c.erase(c.begin());
    target = Polynomial(std::move(c));
  }

  std::vector<cplx> roots = target.degree() >= 1 ? aberth_roots(target) : std::vector<cplx>{};
  for (auto& r : roots) r = polish(model, r, q);

  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i] - roots[j]) < kMultipleRoot * (1.0 + std::abs(roots[i]))) {
        std::ostringstream os;
        os << "psi(z) = " << q << " has a (near) multiple root at " << roots[i]
           << "; the logarithmic case is not supported";
        throw MultipleRootError(os.str());
      }
    }
  }

  // Enforce exact conjugate closure.
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (std::abs(roots[i].imag()) < kRealSnap * (1.0 + std::abs(roots[i]))) {
      roots[i] = {roots[i].real(), 0.0};
      continue;
    }
    std::size_t best = roots.size();
    double best_d = 0.0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(roots[j] - std::conj(roots[i]));
      if (best == roots.size() || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best == roots.size() || best_d > 1e-6 * (1.0 + std::abs(roots[i]))) {
      throw CountLawError("roots of psi(z) = q are not closed under conjugation");
    }
    used[best] = true;
    const cplx avg = 0.5 * (roots[i] + std::conj(roots[best]));
    roots[i] = avg;
    roots[best] = std::conj(avg);
  }

  RootSet rs;
  rs.q = q;
  for (const auto& r : roots) {
    const double scale = std::max(1.0, q);
    const double resid = std::abs(laplace_exponent(model, r) - q);
    const double term_scale = 0.5 * model.sigma * model.sigma * std::norm(r) +
                              std::abs(model.mu * r) + jump_intensity(model);
    // Next to a pole |psi'| is huge and even the correctly rounded root leaves a
    // residual of about |z psi'(z)| eps; accept that floor.
    const double floor = 32.0 * std::numeric_limits<double>::epsilon() * std::abs(r) *
                         std::abs(laplace_exponent_derivative(model, r));
    if (!(resid < 1e-9 * scale || resid < 1e-12 * term_scale || resid <= floor)) {
      std::ostringstream os;
      os << "root " << r << " has residual |psi - q| = " << resid;
      throw CountLawError(os.str());
    }
    if (r.real() > 0.0) {
      rs.zeta.push_back(r);
    } else if (r.real() < 0.0) {
      rs.zeta_hat.push_back(-r);
    } else {
      throw CountLawError("root on the imaginary axis");
    }
  }
  if (q == 0.0) rs.zeta_hat.push_back(0.0);
  sort_and_snap(rs.zeta);
  sort_and_snap(rs.zeta_hat);

  const auto [K, Kh] = expected_root_counts(model);
  if (rs.K() != K || rs.K_hat() != Kh) {
    std::ostringstream os;
    os << "root count law violated: K = " << rs.K() << " (expected " << K << "), K_hat = "
       << rs.K_hat() << " (expected " << Kh << ")";
    throw CountLawError(os.str());
  }
  for (const auto* side : {&rs.zeta, &rs.zeta_hat}) {
    if (side->empty()) continue;
    const cplx first = side->front();
    if (first.imag() != 0.0) throw CountLawError("leading root is not real");
    for (std::size_t j = 1; j < side->size(); ++j) {
      if (!((*side)[j].real() > first.real())) {
        throw CountLawError("leading root does not have strictly minimal real part");
      }
    }
  }
  return rs;
}

double cramer_abscissa(const RootSet& roots) {
  if (roots.zeta.empty()) throw PreconditionError("cramer_abscissa: no roots in Re(z) > 0");
  return roots.zeta.front().real();
}

bool AssumptionReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string AssumptionReport::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!out.empty()) out += ", ";
    out += c.id;
  }
  return out;
}

AssumptionReport check_assumptions(const LevyModel& model, const RootSet& roots) {
  AssumptionReport rep;
  auto grade = [](AssumptionCheck& c, double dist, const std::string& what) {
    if (dist < kIntegerTol) {
      c.passed = false;
      c.detail += (c.detail.empty() ? "" : "; ") + what;
    } else if (dist < kIntegerWarn) {
      c.warning = true;
      c.detail += (c.detail.empty() ? "near-integer: " : "; near-integer: ") + what;
    }
  };

  AssumptionCheck a1{"A.1", true, false, {}};
  for (std::size_t j = 0; j < model.negative_jumps.size(); ++j) {
    if (model.negative_jumps[j].multiplicity() != 1) {
      a1.passed = false;
      a1.detail += "negative term " + std::to_string(j) + " has multiplicity " +
                   std::to_string(model.negative_jumps[j].multiplicity()) + "; ";
    }
  }

  AssumptionCheck a2{"A.2", true, false, {}};
  for (const auto& t : model.negative_jumps) {
    std::ostringstream os;
    os << "rho_hat = " << t.rho;
    grade(a2, distance_to_natural(t.rho), os.str());
  }

  AssumptionCheck a3{"A.3", true, false, {}};
  const auto& neg = model.negative_jumps;
  for (std::size_t i = 0; i < neg.size(); ++i) {
    for (std::size_t j = i + 1; j < neg.size(); ++j) {
      std::ostringstream os;
      os << "rho_hat difference " << neg[j].rho - neg[i].rho;
      grade(a3, distance_to_nonzero_integer(neg[j].rho - neg[i].rho), os.str());
    }
  }

  AssumptionCheck a4{"A.4", true, false, {}};
  for (std::size_t i = 0; i < roots.zeta.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.zeta.size(); ++j) {
      if (std::abs(roots.zeta[i] - roots.zeta[j]) < kMultipleRoot * (1.0 + std::abs(roots.zeta[i]))) {
        a4.passed = false;
        a4.detail = "multiple zero in Re(z) > 0";
      }
    }
  }

  AssumptionCheck a5{"A.5", true, false, {}};
  for (std::size_t i = 0; i < roots.zeta.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.zeta.size(); ++j) {
      std::ostringstream os;
      os << "zeta difference " << roots.zeta[j] - roots.zeta[i];
      grade(a5, distance_to_nonzero_integer(roots.zeta[j] - roots.zeta[i]), os.str());
    }
  }

  rep.checks = {a1, a2, a3, a4, a5};
  return rep;
}

void require_assumptions(const LevyModel& model, const RootSet& roots) {
  const auto rep = check_assumptions(model, roots);
  if (rep.all_passed()) return;
  std::string msg = "assumption(s) " + rep.failures() + " violated:";
  for (const auto& c : rep.checks) {
    if (!c.passed) msg += " [" + c.id + "] " + c.detail;
  }
  throw AssumptionError(msg);
}

}  // namespace levyexp
