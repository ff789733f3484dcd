#include "levyexp/simd/path_kernel.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace levyexp::simd {
namespace {

using Fn = double (*)(const double*, std::size_t, double, double, double*);

Isa best_isa() noexcept { return avx2_available() ? Isa::avx2 : Isa::scalar; }

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{best_isa()};
  return isa;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double segment_integral_scalar(const double* inc, std::size_t n, double x0, double h,
                               double* x_end) {
  double x = x0;
  double s = 0.5 * std::exp(x0);
  for (std::size_t k = 0; k < n; ++k) {
    x += inc[k];
    s += std::exp(x);
  }
  s -= 0.5 * std::exp(x);
  if (x_end != nullptr) *x_end = x;
  return h * s;
}

bool avx2_compiled() noexcept {
#ifdef LEVYEXP_HAVE_AVX2
  return true;
#else
  return false;
#endif
}

bool avx2_available() noexcept {
#if defined(LEVYEXP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#ifndef LEVYEXP_HAVE_AVX2
double segment_integral_avx2(const double*, std::size_t, double, double, double*) {
  throw std::logic_error("AVX2 kernel not built");
}
#endif

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) {
    throw std::invalid_argument("AVX2 kernel is not available on this machine");
  }
  current().store(isa, std::memory_order_relaxed);
}

double segment_integral(const double* inc, std::size_t n, double x0, double h, double* x_end) {
  const Fn fn = active_isa() == Isa::avx2 ? &segment_integral_avx2 : &segment_integral_scalar;
  return fn(inc, n, x0, h, x_end);
}

}  // namespace levyexp::simd
