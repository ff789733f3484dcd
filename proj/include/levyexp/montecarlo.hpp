#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "levyexp/levy_model.hpp"
#include "levyexp/mellin.hpp"

namespace levyexp {

/// Counter-based generator: output n is the SplitMix64 finaliser applied to
/// key + n * golden gamma. Streams with distinct keys are independent, so a
/// path's draws do not depend on how paths are partitioned across threads.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    std::uint64_t z = key_ + (++counter_) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

using Rng = CounterRng;

/// Independent stream for one path, keyed by (seed, path index).
Rng path_rng(std::uint64_t seed, std::uint64_t path);

struct McConfig {
  long paths = 100000;
  std::uint64_t seed = 12345;
  double diffusion_step = 0.0;  // <= 0 selects 0.005 / max(1, q)
  int grid_points = 4096;       // inverse-CDF table size for general jump densities
  int threads = 1;              // 0 = hardware concurrency
  double q0_truncation = 1e-12;  // q = 0: stop once an increment is below this share of I
};

/// Draws jumps from pi(x) dx / lambda.
/// Real poles with nonnegative coefficients use the exact Gamma mixture; any
/// other model uses an inverse-CDF table on a log grid with an exponential tail.
class JumpSampler {
 public:
  JumpSampler(const LevyModel& model, int grid_points = 4096);

  double operator()(Rng& rng) const;
  bool exact() const noexcept { return exact_; }
  double intensity() const noexcept { return lambda_; }

 private:
  struct Component {
    double weight;
    int shape;
    double rate;
    double sign;
  };
  struct Table {
    std::vector<double> x;    // grid, starting at 0
    std::vector<double> cdf;  // normalised to the tabulated mass
    double tail_share = 0.0;  // mass beyond x.back(), relative to the side
    double tail_rate = 1.0;
  };

  double sample_table(const Table& t, Rng& rng) const;

  bool exact_ = true;
  double lambda_ = 0.0;
  std::vector<Component> components_;
  std::vector<double> weights_;
  double positive_share_ = 0.0;
  Table positive_, negative_;
};

/// One draw from pi / lambda. Throws PreconditionError when lambda = 0.
double sample_jump(const LevyModel& model, Rng& rng);

struct McSamples {
  std::vector<double> I;       // exponential functional per path
  std::vector<double> X;       // X at the killing time (q > 0), else X at truncation
  std::vector<double> T;       // killing time (q > 0), else truncation time
  std::vector<long> jumps;     // jumps before T
  double step = 0.0;           // diffusion step used
};

/// Simulates paths of X up to an independent Exp(q) time (or to truncation when
/// q = 0 and E[X_1] < 0). Identical for any thread count.
McSamples simulate_paths(const LevyModel& model, double q, const McConfig& cfg);

/// The I_q samples only.
std::vector<double> simulate_exponential_functional(const LevyModel& model, double q,
                                                    const McConfig& cfg);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error.
Estimate mean_estimate(const std::vector<double>& v);

/// Sample mean and standard error of I^{s-1}.
Estimate estimate_mellin(const std::vector<double>& samples, double s);

/// Sample mean and standard error of exp(u X) I^{s-1}.
Estimate estimate_joint(const McSamples& samples, double u, double s);

struct McRow {
  std::string statistic;  // moment, mellin, cdf, price
  double parameter = 0.0;  // n, s, x or strike
  double analytic = 0.0;
  double mc = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool flagged = false;  // |z| > 3
};

struct McSkip {
  std::string statistic;
  std::string reason;
};

struct McReport {
  std::string model_case;
  double q = 0.0;
  long paths = 0;
  std::uint64_t seed = 0;
  double step = 0.0;
  std::vector<McRow> rows;
  std::vector<McSkip> skipped;

  bool all_pass() const noexcept;
  double max_abs_z() const noexcept;
};

/// Moment n = 1, M(s) at 4 strip points, the CDF at 5 sample quantiles and the
/// Asian price at 3 strikes, each with its z-score. Statistics whose Monte Carlo
/// variance is infinite are listed under `skipped`.
McReport compare_report(const LevyModel& model, double q, const McConfig& cfg,
                        const MellinParams& params);

/// Same, against an existing sample set.
McReport compare_report(const McSamples& samples, const McConfig& cfg, const MellinParams& params);

}  // namespace levyexp
