#include "levyexp/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyexp/errors.hpp"

namespace levyexp {
namespace {

const cplx kLogZero{-std::numeric_limits<double>::infinity(), 0.0};

// log of 1/Gamma(z): -inf real part on poles.
cplx log_rgamma(cplx z) {
  if (is_nonpositive_integer(z)) return kLogZero;
  return -log_gamma(z);
}

cplx log_gamma_checked(cplx z) {
  if (is_nonpositive_integer(z)) {
    std::ostringstream os;
    os << "G(s): numerator gamma argument " << z << " is a pole";
    throw PoleError(z, 1, os.str());
  }
  return log_gamma(z);
}

void check_strip(const MellinParams& p, cplx s) {
  if (!(s.real() > 0.0 && s.real() < p.strip_right())) {
    std::ostringstream os;
    os << "Re(s) = " << s.real() << " outside the Mellin strip (0, " << p.strip_right() << ")";
    throw StripError(os.str());
  }
}

}  // namespace

double MellinParams::continuation_left() const noexcept {
  if (q > 0.0) return 0.0;
  double left = -std::numeric_limits<double>::infinity();
  for (const auto& r : rho_hat) left = std::max(left, -r.location.real());
  return left;
}

int MellinParams::M() const noexcept {
  int m = 0;
  for (const auto& r : rho) m += r.multiplicity;
  return m;
}

int MellinParams::M_hat() const noexcept {
  int m = 0;
  for (const auto& r : rho_hat) m += r.multiplicity;
  return m;
}

double scale_constant(const LevyModel& model, double q) {
  switch (model_case(model)) {
    case ModelCase::diffusive: return 0.5 * model.sigma * model.sigma;
    case ModelCase::drift_only: return std::abs(model.mu);
    case ModelCase::pure_jump: return q + jump_intensity(model);
  }
  return 1.0;
}

MellinParams build_params(const LevyModel& model, double q, const RootSet& roots) {
  if (!(q > 0.0) && !(q == 0.0 && mean(model) < 0.0)) {
    throw PreconditionError("Mellin transform requires q > 0, or q = 0 with E[X_1] < 0");
  }
  if (roots.q != q) throw PreconditionError("root set was solved for a different q");
  if (roots.zeta.empty()) throw PreconditionError("no root in Re(z) > 0");

  MellinParams p;
  p.model = model;
  p.model_case = model_case(model);
  p.q = q;
  p.lambda = jump_intensity(model);
  p.A = scale_constant(model, q);
  p.zeta = roots.zeta;
  p.zeta_hat = roots.zeta_hat;
  p.theta = cramer_abscissa(roots);
  for (const auto& t : model.positive_jumps) p.rho.push_back({t.rho, t.multiplicity()});
  for (const auto& t : model.negative_jumps) p.rho_hat.push_back({t.rho, t.multiplicity()});
  p.log_G1 = 0.0;
  p.log_G1 = log_big_G(p, 1.0);
  return p;
}

MellinParams make_params(const LevyModel& model, double q) {
  require_valid(model);
  return build_params(model, q, solve(model, q));
}

cplx log_big_G(const MellinParams& p, cplx s) {
  cplx acc = 0.0;
  for (const auto& z : p.zeta) acc += log_gamma_checked(1.0 + z - s);
  for (const auto& r : p.rho_hat) acc += static_cast<double>(r.multiplicity) * log_gamma_checked(r.location + s);
  for (const auto& r : p.rho) {
    const cplx l = log_rgamma(1.0 + r.location - s);
    if (std::isinf(l.real())) return kLogZero;
    acc += static_cast<double>(r.multiplicity) * l;
  }
  for (const auto& z : p.zeta_hat) {
    const cplx l = log_rgamma(z + s);
    if (std::isinf(l.real())) return kLogZero;
    acc += l;
  }
  return acc;
}

cplx mellin_transform(const MellinParams& p, cplx s) {
  check_strip(p, s);
  const cplx lg = log_big_G(p, s);
  if (std::isinf(lg.real())) return 0.0;
  return std::exp((1.0 - s) * std::log(p.A) + log_gamma(s) + lg - p.log_G1);
}

cplx joint_transform(const MellinParams& p, cplx u, cplx s) {
  if (!(p.q > 0.0)) throw PreconditionError("joint transform requires q > 0");
  const double zh1 = p.zeta_hat.empty() ? std::numeric_limits<double>::infinity()
                                        : p.zeta_hat.front().real();
  if (!(u.real() > -zh1 && u.real() < p.theta)) {
    std::ostringstream os;
    os << "Re(u) = " << u.real() << " outside (" << -zh1 << ", " << p.theta << ")";
    throw StripError(os.str());
  }
  if (!(s.real() > 0.0 && s.real() < 1.0 + p.theta - u.real())) {
    std::ostringstream os;
    os << "Re(s) = " << s.real() << " outside (0, " << 1.0 + p.theta - u.real() << ")";
    throw StripError(os.str());
  }
  const cplx lg = log_big_G(p, s + u);
  if (std::isinf(lg.real())) return 0.0;
  const cplx lg1 = log_big_G(p, 1.0 + u);
  const cplx psi_u = laplace_exponent(p.model, u);
  return p.q / (p.q - psi_u) *
         std::exp((1.0 - s) * std::log(p.A) + log_gamma(s) + lg - lg1);
}

double moment(const MellinParams& p, int n) {
  if (n < 1) throw MomentError("moment order must be a positive integer");
  if (!(n < p.theta)) {
    std::ostringstream os;
    os << "E[I_q^" << n << "] is infinite: n >= theta = " << p.theta;
    throw MomentError(os.str());
  }
  return mellin_transform(p, static_cast<double>(n + 1)).real();
}

cplx recurrence_ratio(const MellinParams& p, cplx s) {
  return s / (p.q - laplace_exponent(p.model, s));
}

cplx recurrence_ratio_factorized(const MellinParams& p, cplx s) {
  cplx v = s / p.A;
  if ((p.K() - p.M()) % 2 != 0) v = -v;
  for (const auto& r : p.rho) {
    for (int k = 0; k < r.multiplicity; ++k) v *= (s - r.location);
  }
  for (const auto& r : p.rho_hat) {
    for (int k = 0; k < r.multiplicity; ++k) v *= (s + r.location);
  }
  for (const auto& z : p.zeta) v /= (s - z);
  for (const auto& z : p.zeta_hat) v /= (s + z);
  return v;
}

}  // namespace levyexp
