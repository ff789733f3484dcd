#pragma once

#include <cstddef>

namespace levyexp::simd {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

/// Trapezoid integral of exp(X) over one diffusion segment with step h, where
/// X_0 = x0 and X_{k+1} = X_k + inc[k] for k < n. Writes X_n to *x_end.
///   h * sum_{k<n} (e^{X_k} + e^{X_{k+1}}) / 2
double segment_integral_scalar(const double* inc, std::size_t n, double x0, double h,
                               double* x_end);

/// AVX2/FMA variant; only callable when avx2_compiled() is true.
double segment_integral_avx2(const double* inc, std::size_t n, double x0, double h,
                             double* x_end);

/// True when the AVX2 kernel was built into the library.
bool avx2_compiled() noexcept;

/// True when the AVX2 kernel was built and the CPU reports AVX2 and FMA.
bool avx2_available() noexcept;

/// Kernel used by segment_integral(). Defaults to the best available ISA.
Isa active_isa() noexcept;

/// Overrides the kernel choice; throws std::invalid_argument for an ISA that is
/// not available on this machine.
void force_isa(Isa isa);

/// Runtime-dispatched segment integral.
double segment_integral(const double* inc, std::size_t n, double x0, double h, double* x_end);

}  // namespace levyexp::simd
