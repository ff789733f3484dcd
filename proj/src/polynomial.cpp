#include "levyexp/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levyexp/errors.hpp"

namespace levyexp {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == cplx(0.0)) coeffs_.pop_back();
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::pair<cplx, cplx> Polynomial::eval_with_derivative(cplx z) const {
  cplx p = 0.0, dp = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::pow(int n) const {
  Polynomial r = constant(1.0);
  for (int k = 0; k < n; ++k) r = r * *this;
  return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(cplx s, const Polynomial& p) {
  std::vector<cplx> c(p.coeffs_);
  for (auto& v : c) v *= s;
  return Polynomial(std::move(c));
}

std::vector<cplx> aberth_roots(const Polynomial& p, int max_iterations) {
  const int n = p.degree();
  if (n < 1) throw DomainError("aberth_roots: polynomial of degree < 1");
  const auto a = p.coeffs();
  if (n == 1) return {-a[0] / a[1]};

  // Start on a circle around the root centroid whose radius is the
  // geometric-mean root modulus relative to that centroid.
  const cplx centre = -a[n - 1] / (static_cast<double>(n) * a[n]);
  double radius = 0.0;
  {
    std::vector<cplx> shifted(a.begin(), a.end());
    // Taylor shift to the centroid.
    for (int i = 0; i < n; ++i) {
      for (int k = n - 1; k >= i; --k) shifted[k] += centre * shifted[k + 1];
    }
    for (int k = 0; k < n; ++k) {
      const double r = std::pow(std::abs(shifted[k] / shifted[n]), 1.0 / (n - k));
      radius = std::max(radius, r);
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;
  }
  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / n + 0.4;
    z[k] = centre + radius * cplx(std::cos(ang), std::sin(ang));
  }

  std::vector<bool> done(n, false);
  for (int it = 0; it < max_iterations; ++it) {
    bool all_done = true;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      const auto [pv, dpv] = p.eval_with_derivative(z[k]);
      if (pv == cplx(0.0)) {
        done[k] = true;
        continue;
      }
      const cplx ratio = pv / dpv;
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      }
      const cplx w = ratio / (1.0 - ratio * sum);
      if (std::isfinite(w.real()) && std::isfinite(w.imag())) z[k] -= w;
      if (std::abs(w) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z[k])) {
        done[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }
  return z;
}

}  // namespace levyexp
