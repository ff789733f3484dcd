#pragma once

#include <complex>
#include <span>
#include <vector>

#include "levyexp/gamma.hpp"

namespace levyexp {

/// Dense polynomial with complex coefficients in ascending degree order.
/// The empty coefficient list is the zero polynomial.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);

  static Polynomial constant(cplx c) { return Polynomial({c}); }
  /// (a + b z)
  static Polynomial linear(cplx a, cplx b) { return Polynomial({a, b}); }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  cplx operator[](int k) const { return k <= degree() ? coeffs_[k] : cplx(0.0); }
  cplx leading() const { return coeffs_.back(); }

  cplx operator()(cplx z) const;
  /// p(z) and p'(z) in one Horner pass.
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const;

  Polynomial derivative() const;
  Polynomial pow(int n) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(cplx s, const Polynomial& p);

 private:
  void trim();
  std::vector<cplx> coeffs_;
};

/// All roots of a polynomial of degree >= 1 by Aberth-Ehrlich simultaneous
/// iteration. Roots are returned unpolished and unordered.
std::vector<cplx> aberth_roots(const Polynomial& p, int max_iterations = 2000);

}  // namespace levyexp
