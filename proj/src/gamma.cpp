#include "levyexp/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "levyexp/errors.hpp"

namespace levyexp {
namespace {

constexpr double kStirlingRadius = 15.0;
constexpr double kTaylorRadius = 0.2;

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,        -1.0 / 360.0,          1.0 / 1260.0,       -1.0 / 1680.0,
    1.0 / 1188.0,      -691.0 / 360360.0,     1.0 / 156.0,        -3617.0 / 122400.0,
    43867.0 / 244188.0, -174611.0 / 125400.0};

// (-1)^k zeta(k) / k, k = 2..27: log Gamma(1+w) = -gamma w + sum c_k w^k
constexpr std::array<double, 26> kTaylor = {
    0.82246703342411321824,   -0.40068563438653142847,  0.27058080842778454788,
    -0.20738555102867398527,  0.16955717699740818995,   -0.14404989676884611812,
    0.12550966952474304242,   -0.11133426586956469049,  0.10009945751278180853,
    -0.090954017145829042233, 0.083353840546109004025,  -0.076932516411352191473,
    0.071432946295361336059,  -0.066668705882420468033, 0.062500955141213040742,
    -0.058823978658684582339, 0.055555767627403611102,  -0.052631679379616660734,
    0.05000004769810169364,   -0.047619070330142227991, 0.045454556293204669442,
    -0.043478266053040259361, 0.041666669150341210469,  -0.040000001192140140586,
    0.038461539034675185706,  -0.037037037312989325549};

constexpr double kEulerGamma = 0.57721566490153286061;

cplx stirling(cplx z) {
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv;
  for (double c : kStirling) {
    series += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + half_log_2pi + series;
}

// log Gamma(1 + w) for |w| <= kTaylorRadius
cplx taylor_at_one(cplx w) {
  cplx acc = 0.0;
  for (auto it = kTaylor.rbegin(); it != kTaylor.rend(); ++it) acc = (acc + *it) * w;
  return (acc - kEulerGamma) * w;
}

}  // namespace

bool is_nonpositive_integer(cplx z, double tol) {
  if (z.real() > tol) return false;
  const double n = std::round(z.real());
  return std::abs(z - cplx(n, 0.0)) < tol;
}

cplx log_gamma(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return {std::nan(""), std::nan("")};
  if (is_nonpositive_integer(z)) {
    throw PoleError(z, 1, "log_gamma: pole at non-positive integer");
  }
  if (std::abs(z - 1.0) <= kTaylorRadius) return taylor_at_one(z - 1.0);
  if (std::abs(z - 2.0) <= kTaylorRadius) return taylor_at_one(z - 2.0) + std::log(z - 1.0);
  if (z.real() >= 0.0 && std::abs(z) >= kStirlingRadius) return stirling(z);

  // Upward recurrence. Summing principal logs of z + k keeps the result on
  // the branch that is continuous off the negative real axis.
  cplx shift_sum = 0.0;
  cplx w = z;
  while (w.real() < 0.0 || std::abs(w) < kStirlingRadius) {
    shift_sum += std::log(w);
    w += 1.0;
  }
  return stirling(w) - shift_sum;
}

cplx reciprocal_gamma(cplx z) {
  if (is_nonpositive_integer(z)) return 0.0;
  return std::exp(-log_gamma(z));
}

}  // namespace levyexp
