#include "levyexp/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyexp/errors.hpp"

namespace levyexp {
namespace {

constexpr double kPoleGuard = 1e-10;
constexpr double kSameRoot = 1e-12;
constexpr int kGridPoints = 2000;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

cplx ipow(cplx base, int n) {
  cplx r = 1.0;
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

bool near(cplx a, cplx b, double rel) { return std::abs(a - b) <= rel * (1.0 + std::abs(a)); }

// sum_i alpha_i (i-1)! [ d^{-i} - rho^{-i} ] for one term, d = rho -/+ z.
cplx pf_block(const JumpTerm& t, cplx d) {
  cplx acc = 0.0;
  const cplx inv_d = 1.0 / d;
  const cplx inv_r = 1.0 / t.rho;
  cplx pd = inv_d, pr = inv_r;
  for (int i = 1; i <= t.multiplicity(); ++i) {
    acc += t.alphas[i - 1] * factorial(i - 1) * (pd - pr);
    pd *= inv_d;
    pr *= inv_r;
  }
  return acc;
}

void guard_pole(const JumpTerm& t, cplx pole, cplx z) {
  if (std::abs(z - pole) < kPoleGuard * (1.0 + std::abs(pole))) {
    std::ostringstream os;
    os << "laplace exponent evaluated at pole " << pole << " (multiplicity " << t.multiplicity()
       << ")";
    throw PoleError(pole, t.multiplicity(), os.str());
  }
}

cplx side_density(const std::vector<JumpTerm>& side, double ax, double* scale) {
  cplx acc = 0.0;
  double mag = 0.0;
  for (const auto& t : side) {
    const cplx e = std::exp(-t.rho * ax);
    double xp = 1.0;
    for (const auto& a : t.alphas) {
      const cplx term = a * xp * e;
      acc += term;
      mag += std::abs(term);
      xp *= ax;
    }
  }
  if (scale) *scale = mag;
  return acc;
}

void check_side(const std::vector<JumpTerm>& side, const char* label, ValidationReport& rep) {
  for (std::size_t j = 0; j < side.size(); ++j) {
    const auto& t = side[j];
    std::ostringstream where;
    where << label << " term " << j;
    if (!std::isfinite(t.rho.real()) || !std::isfinite(t.rho.imag())) {
      rep.violations.push_back({"non_finite", where.str() + ": rho is not finite"});
      continue;
    }
    if (t.rho.real() <= 0.0) {
      rep.violations.push_back({"nonpositive_rho", where.str() + ": Re(rho) <= 0"});
    }
    if (t.alphas.empty()) {
      rep.violations.push_back({"empty_alphas", where.str() + ": alpha list is empty"});
      continue;
    }
    if (t.alphas.back() == cplx(0.0)) {
      rep.violations.push_back(
          {"zero_leading_alpha", where.str() + ": last alpha is zero (declared multiplicity too high)"});
    }
    for (std::size_t k = j + 1; k < side.size(); ++k) {
      if (near(t.rho, side[k].rho, kSameRoot)) {
        std::ostringstream os;
        os << label << " terms " << j << " and " << k << " share rho " << t.rho;
        rep.violations.push_back({"duplicate_rho", os.str()});
      }
    }
    const bool real_rho = std::abs(t.rho.imag()) <= kSameRoot * (1.0 + std::abs(t.rho));
    if (real_rho) {
      for (const auto& a : t.alphas) {
        if (std::abs(a.imag()) > kSameRoot * (1.0 + std::abs(a))) {
          rep.violations.push_back(
              {"missing_conjugate", where.str() + ": real rho with non-real alpha"});
          break;
        }
      }
      continue;
    }
    const auto partner = std::find_if(side.begin(), side.end(), [&](const JumpTerm& o) {
      if (!near(o.rho, std::conj(t.rho), kSameRoot) || o.alphas.size() != t.alphas.size()) return false;
      for (std::size_t i = 0; i < o.alphas.size(); ++i) {
        if (!near(o.alphas[i], std::conj(t.alphas[i]), 1e-10)) return false;
      }
      return true;
    });
    if (partner == side.end()) {
      rep.violations.push_back(
          {"missing_conjugate", where.str() + ": complex rho without conjugate partner"});
    }
  }
}

void check_density_grid(const std::vector<JumpTerm>& side, const char* label,
                        ValidationReport& rep) {
  if (side.empty()) return;
  double min_re = std::numeric_limits<double>::infinity();
  for (const auto& t : side) min_re = std::min(min_re, t.rho.real());
  if (!(min_re > 0.0)) return;
  const double lo = 1e-6, hi = std::max(50.0 / min_re, 2e-6);
  const double step = std::log(hi / lo) / (kGridPoints - 1);
  for (int k = 0; k < kGridPoints; ++k) {
    const double x = lo * std::exp(step * k);
    double scale = 0.0;
    const double v = side_density(side, x, &scale).real();
    if (v < -1e-12 * scale) {
      std::ostringstream os;
      os << "negative jump density on the " << label << " side at |x| = " << x << " (pi = " << v
         << ")";
      rep.violations.push_back({"negative_jump_density", os.str()});
      return;
    }
  }
}

}  // namespace

int LevyModel::positive_pole_count() const noexcept {
  int m = 0;
  for (const auto& t : positive_jumps) m += t.multiplicity();
  return m;
}

int LevyModel::negative_pole_count() const noexcept {
  int m = 0;
  for (const auto& t : negative_jumps) m += t.multiplicity();
  return m;
}

ModelCase model_case(const LevyModel& model) noexcept {
  if (model.sigma > 0.0) return ModelCase::diffusive;
  if (model.mu != 0.0) return ModelCase::drift_only;
  return ModelCase::pure_jump;
}

const char* to_string(ModelCase c) noexcept {
  switch (c) {
    case ModelCase::diffusive: return "sigma_pos";
    case ModelCase::drift_only: return "drift_only";
    case ModelCase::pure_jump: return "pure_jump";
  }
  return "?";
}

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

ValidationReport validate(const LevyModel& model) {
  ValidationReport rep;
  if (!std::isfinite(model.sigma) || !std::isfinite(model.mu)) {
    rep.violations.push_back({"non_finite", "sigma or mu is not finite"});
  }
  if (model.sigma < 0.0) rep.violations.push_back({"negative_sigma", "sigma < 0"});
  check_side(model.positive_jumps, "positive", rep);
  check_side(model.negative_jumps, "negative", rep);
  check_density_grid(model.positive_jumps, "positive", rep);
  check_density_grid(model.negative_jumps, "negative", rep);
  if (model.sigma == 0.0 && model.mu == 0.0) {
    bool any = false;
    for (const auto* side : {&model.positive_jumps, &model.negative_jumps}) {
      for (const auto& t : *side) {
        for (const auto& a : t.alphas) any = any || a != cplx(0.0);
      }
    }
    if (!any) rep.violations.push_back({"degenerate_model", "sigma, mu and all jumps are zero"});
  }
  return rep;
}

void require_valid(const LevyModel& model) {
  const auto rep = validate(model);
  if (rep.ok()) return;
  std::ostringstream os;
  os << "invalid model:";
  for (const auto& v : rep.violations) os << " [" << v.code << "] " << v.message << ';';
  throw ModelError(os.str());
}

double levy_density(const LevyModel& model, double x) {
  if (x == 0.0) throw DomainError("levy_density: x = 0 is excluded");
  const auto& side = x > 0.0 ? model.positive_jumps : model.negative_jumps;
  return side_density(side, std::abs(x), nullptr).real();
}

double jump_intensity(const LevyModel& model) {
  cplx lam = 0.0;
  for (const auto* side : {&model.positive_jumps, &model.negative_jumps}) {
    for (const auto& t : *side) {
      for (int i = 1; i <= t.multiplicity(); ++i) {
        lam += t.alphas[i - 1] * factorial(i - 1) * ipow(1.0 / t.rho, i);
      }
    }
  }
  return lam.real();
}

cplx laplace_exponent(const LevyModel& model, cplx z) {
  for (const auto& t : model.positive_jumps) guard_pole(t, t.rho, z);
  for (const auto& t : model.negative_jumps) guard_pole(t, -t.rho, z);
  cplx v = 0.5 * model.sigma * model.sigma * z * z + model.mu * z;
  for (const auto& t : model.positive_jumps) v += pf_block(t, t.rho - z);
  for (const auto& t : model.negative_jumps) v += pf_block(t, t.rho + z);
  return v;
}

cplx laplace_exponent_derivative(const LevyModel& model, cplx z) {
  for (const auto& t : model.positive_jumps) guard_pole(t, t.rho, z);
  for (const auto& t : model.negative_jumps) guard_pole(t, -t.rho, z);
  cplx v = model.sigma * model.sigma * z + model.mu;
  for (const auto& t : model.positive_jumps) {
    const cplx inv = 1.0 / (t.rho - z);
    for (int i = 1; i <= t.multiplicity(); ++i) {
      v += t.alphas[i - 1] * factorial(i) * ipow(inv, i + 1);
    }
  }
  for (const auto& t : model.negative_jumps) {
    const cplx inv = 1.0 / (t.rho + z);
    for (int i = 1; i <= t.multiplicity(); ++i) {
      v -= t.alphas[i - 1] * factorial(i) * ipow(inv, i + 1);
    }
  }
  return v;
}

double mean(const LevyModel& model) { return laplace_exponent_derivative(model, 0.0).real(); }

std::vector<Pole> poles(const LevyModel& model) {
  std::vector<Pole> out;
  for (const auto& t : model.positive_jumps) out.push_back({t.rho, t.multiplicity()});
  for (const auto& t : model.negative_jumps) out.push_back({-t.rho, t.multiplicity()});
  return out;
}

}  // namespace levyexp
