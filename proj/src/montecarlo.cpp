#include "levyexp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <boost/random/normal_distribution.hpp>

#include "levyexp/density.hpp"
#include "levyexp/errors.hpp"
#include "levyexp/simd/path_kernel.hpp"

namespace levyexp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Diffusion steps are generated and integrated in blocks of this size.
constexpr std::size_t kBlock = 1024;
// Hard stop for q = 0 paths that never meet the truncation rule.
constexpr double kMaxTime = 1e7;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

struct PathResult {
  double I = 0.0;
  double X = 0.0;
  double T = 0.0;
  long jumps = 0;
};

// Integrates exp(X) along one path. Distribution objects are created per path
// so that no cached variate leaks from one path into the next.
class PathSimulator {
 public:
  PathSimulator(const LevyModel& m, double q, const JumpSampler& jumps, double h, double trunc)
      : m_(m), q_(q), jumps_(jumps), h_(h), trunc_(trunc), buf_(kBlock) {}

  PathResult run(Rng& rng) {
    // Ziggurat normals; the diffusion steps dominate the cost of a path.
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    PathResult r;
    const double T = q_ > 0.0 ? std::exponential_distribution<double>(q_)(rng) : kInf;
    const double lam = jumps_.intensity();
    double t = 0.0;
    for (;;) {
      const double gap = lam > 0.0 ? std::exponential_distribution<double>(lam)(rng) : kInf;
      const double end = std::min(t + gap, T);
      const bool stop = segment(r, end - t, rng, normal);
      t = end;
      if (t >= T) break;
      if (stop || t > kMaxTime) break;
      r.X += jumps_(rng);
      ++r.jumps;
    }
    r.T = std::isfinite(T) ? T : t;
    return r;
  }

 private:
  // q = 0: the integrand exp(X) per unit time is negligible against I.
  bool negligible(const PathResult& r) const {
    return q_ == 0.0 && std::exp(r.X) < trunc_ * r.I;
  }

  // Adds the integral over a segment of length `len` without jumps. Returns true
  // when a q = 0 path has met the truncation rule.
  bool segment(PathResult& r, double len, Rng& rng, boost::random::normal_distribution<double>& normal) {
    const double mu = m_.mu;
    if (m_.sigma == 0.0) {
      if (std::isinf(len)) {
        // Only reachable for q = 0 and no jumps, where mu < 0.
        r.I += std::exp(r.X) / -mu;
        return true;
      }
      const double ex = std::exp(r.X);
      r.I += mu == 0.0 ? ex * len : ex * std::expm1(mu * len) / mu;
      r.X += mu * len;
      return negligible(r);
    }
    const long total = std::isinf(len) ? -1 : std::max(1L, static_cast<long>(std::ceil(len / h_)));
    const double step = total > 0 ? len / static_cast<double>(total) : h_;
    const double drift = mu * step;
    const double vol = m_.sigma * std::sqrt(step);
    long done = 0;
    for (;;) {
      const std::size_t n =
          total > 0 ? static_cast<std::size_t>(std::min<long>(kBlock, total - done)) : kBlock;
      for (std::size_t k = 0; k < n; ++k) buf_[k] = drift + vol * normal(rng);
      double x_end = r.X;
      r.I += simd::segment_integral(buf_.data(), n, r.X, step, &x_end);
      r.X = x_end;
      done += static_cast<long>(n);
      if (negligible(r)) return true;
      if (total > 0 && done >= total) return false;
      if (done * step > kMaxTime) return true;
    }
  }

  const LevyModel& m_;
  double q_;
  const JumpSampler& jumps_;
  double h_;
  double trunc_;
  std::vector<double> buf_;
};

double variance(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return v.size() > 1 ? s / static_cast<double>(v.size() - 1) : 0.0;
}

McRow make_row(std::string statistic, double parameter, double analytic, Estimate e) {
  McRow r;
  r.statistic = std::move(statistic);
  r.parameter = parameter;
  r.analytic = analytic;
  r.mc = e.value;
  r.std_error = e.std_error;
  const double diff = e.value - analytic;
  r.z = e.std_error > 0.0 ? diff / e.std_error : (diff == 0.0 ? 0.0 : kInf);
  r.flagged = !(std::abs(r.z) <= 3.0);
  return r;
}

}  // namespace

Rng path_rng(std::uint64_t seed, std::uint64_t path) {
  return Rng(splitmix64(seed ^ splitmix64(path + 1)));
}

JumpSampler::JumpSampler(const LevyModel& model, int grid_points) {
  lambda_ = jump_intensity(model);
  if (!(lambda_ > 0.0)) {
    lambda_ = 0.0;
    return;
  }
  for (const auto* side : {&model.positive_jumps, &model.negative_jumps}) {
    for (const auto& t : *side) {
      if (t.rho.imag() != 0.0) exact_ = false;
      for (const auto& a : t.alphas) {
        if (a.imag() != 0.0 || a.real() < 0.0) exact_ = false;
      }
    }
  }

  if (exact_) {
    double acc = 0.0;
    auto add = [&](const JumpTerm& t, double sign) {
      const double rho = t.rho.real();
      for (int i = 1; i <= t.multiplicity(); ++i) {
        const double w = t.alphas[i - 1].real() * std::tgamma(i) * std::pow(rho, -i);
        if (w <= 0.0) continue;
        acc += w;
        components_.push_back({w, i, rho, sign});
        weights_.push_back(acc);
      }
    };
    for (const auto& t : model.positive_jumps) add(t, 1.0);
    for (const auto& t : model.negative_jumps) add(t, -1.0);
    for (auto& w : weights_) w /= acc;
    return;
  }

  if (grid_points < 16) throw DomainError("JumpSampler: grid_points must be at least 16");
  auto side_mass = [](const std::vector<JumpTerm>& side) {
    cplx m = 0.0;
    for (const auto& t : side) {
      for (int i = 1; i <= t.multiplicity(); ++i) {
        m += t.alphas[i - 1] * std::tgamma(i) * std::pow(t.rho, -static_cast<double>(i));
      }
    }
    return m.real();
  };
  auto build = [&](const std::vector<JumpTerm>& side, double sign, double mass) {
    Table tab;
    if (side.empty() || !(mass > 0.0)) return tab;
    double rate = kInf;
    for (const auto& t : side) rate = std::min(rate, t.rho.real());
    const double x_max = 50.0 / rate;
    const double x_min = 1e-8 * x_max;
    const double ratio = std::pow(x_max / x_min, 1.0 / (grid_points - 1));
    tab.x.push_back(0.0);
    tab.cdf.push_back(0.0);
    double x_prev = 0.0;
    double f_prev = std::max(0.0, levy_density(model, sign * x_min));
    double x = x_min;
    for (int k = 0; k < grid_points; ++k, x *= ratio) {
      const double f = std::max(0.0, levy_density(model, sign * x));
      tab.x.push_back(x);
      tab.cdf.push_back(tab.cdf.back() + 0.5 * (f + f_prev) * (x - x_prev));
      x_prev = x;
      f_prev = f;
    }
    const double tabulated = tab.cdf.back();
    for (auto& c : tab.cdf) c /= tabulated;
    tab.tail_share = std::clamp(1.0 - tabulated / mass, 0.0, 1.0);
    tab.tail_rate = rate;
    return tab;
  };
  const double pos = side_mass(model.positive_jumps);
  const double neg = side_mass(model.negative_jumps);
  positive_share_ = pos / (pos + neg);
  positive_ = build(model.positive_jumps, 1.0, pos);
  negative_ = build(model.negative_jumps, -1.0, neg);
}

double JumpSampler::sample_table(const Table& t, Rng& rng) const {
  const double u = uniform01(rng);
  if (u < t.tail_share) {
    return t.x.back() + std::exponential_distribution<double>(t.tail_rate)(rng);
  }
  const double v = uniform01(rng);
  const auto it = std::upper_bound(t.cdf.begin(), t.cdf.end(), v);
  const std::size_t k = std::clamp<std::size_t>(it - t.cdf.begin(), 1, t.cdf.size() - 1);
  const double c0 = t.cdf[k - 1], c1 = t.cdf[k];
  const double w = c1 > c0 ? (v - c0) / (c1 - c0) : 0.0;
  return t.x[k - 1] + w * (t.x[k] - t.x[k - 1]);
}

double JumpSampler::operator()(Rng& rng) const {
  if (lambda_ == 0.0) throw PreconditionError("sample_jump: the model has no jumps (lambda = 0)");
  if (exact_) {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(weights_.begin(), weights_.end(), u);
    const auto& c = components_[std::min<std::size_t>(it - weights_.begin(), components_.size() - 1)];
    return c.sign * std::gamma_distribution<double>(c.shape, 1.0 / c.rate)(rng);
  }
  if (uniform01(rng) < positive_share_) return sample_table(positive_, rng);
  return -sample_table(negative_, rng);
}

double sample_jump(const LevyModel& model, Rng& rng) { return JumpSampler(model)(rng); }

McSamples simulate_paths(const LevyModel& model, double q, const McConfig& cfg) {
  require_valid(model);
  if (cfg.paths < 1) throw DomainError("simulate: paths must be >= 1");
  if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("simulate: q must be finite and >= 0");
  if (q == 0.0 && !(mean(model) < 0.0)) {
    std::ostringstream os;
    os << "simulate with q = 0 needs E[X_1] < 0 (got " << mean(model) << ")";
    throw PreconditionError(os.str());
  }
  if (q == 0.0 && model.sigma == 0.0 && !model.has_jumps() && !(model.mu < 0.0)) {
    throw PreconditionError("simulate with q = 0 needs a downward drift");
  }
  const double h = cfg.diffusion_step > 0.0 ? cfg.diffusion_step : 0.005 / std::max(1.0, q);
  const JumpSampler sampler(model, cfg.grid_points);

  McSamples out;
  const auto n = static_cast<std::size_t>(cfg.paths);
  out.I.resize(n);
  out.X.resize(n);
  out.T.resize(n);
  out.jumps.resize(n);
  out.step = h;

  auto work = [&](std::size_t begin, std::size_t end) {
    PathSimulator sim(model, q, sampler, h, cfg.q0_truncation);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = path_rng(cfg.seed, i);
      const PathResult r = sim.run(rng);
      out.I[i] = r.I;
      out.X[i] = r.X;
      out.T[i] = r.T;
      out.jumps[i] = r.jumps;
    }
  };

  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    work(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    const std::size_t b = k * chunk, e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& th : pool) th.join();
  return out;
}

std::vector<double> simulate_exponential_functional(const LevyModel& model, double q,
                                                    const McConfig& cfg) {
  return simulate_paths(model, q, cfg).I;
}

Estimate mean_estimate(const std::vector<double>& v) {
  if (v.empty()) return {};
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  return {m, std::sqrt(variance(v, m) / static_cast<double>(v.size()))};
}

Estimate estimate_mellin(const std::vector<double>& samples, double s) {
  if (s == 1.0) return {1.0, 0.0};
  std::vector<double> v(samples.size());
  std::transform(samples.begin(), samples.end(), v.begin(),
                 [s](double x) { return std::pow(x, s - 1.0); });
  return mean_estimate(v);
}

Estimate estimate_joint(const McSamples& samples, double u, double s) {
  std::vector<double> v(samples.I.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::exp(u * samples.X[i]) * std::pow(samples.I[i], s - 1.0);
  }
  return mean_estimate(v);
}

bool McReport::all_pass() const noexcept {
  return std::none_of(rows.begin(), rows.end(), [](const McRow& r) { return r.flagged; });
}

double McReport::max_abs_z() const noexcept {
  double z = 0.0;
  for (const auto& r : rows) z = std::max(z, std::abs(r.z));
  return z;
}

McReport compare_report(const LevyModel& model, double q, const McConfig& cfg,
                        const MellinParams& params) {
  return compare_report(simulate_paths(model, q, cfg), cfg, params);
}

McReport compare_report(const McSamples& samples, const McConfig& cfg, const MellinParams& p) {
  McReport rep;
  rep.model_case = to_string(p.model_case);
  rep.q = p.q;
  rep.paths = static_cast<long>(samples.I.size());
  rep.seed = cfg.seed;
  rep.step = samples.step;
  const double theta = p.theta;
  const bool finite_variance = theta > 2.0;
  const std::string why_var = "E[I_q^2] is infinite (zeta_1 <= 2)";

  if (finite_variance) {
    rep.rows.push_back(make_row("moment", 1.0, moment(p, 1), mean_estimate(samples.I)));
  } else {
    rep.skipped.push_back({"moment", why_var});
  }

  // Points in (1/2, 1 + theta/2), where I^{s-1} has finite variance.
  const double lo = 0.5, hi = 1.0 + 0.5 * theta;
  for (double f : {0.1, 0.35, 0.6, 0.85}) {
    const double s = lo + f * (hi - lo);
    rep.rows.push_back(
        make_row("mellin", s, mellin_transform(p, s).real(), estimate_mellin(samples.I, s)));
  }

  std::vector<double> sorted = samples.I;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  for (double level : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto k = static_cast<std::size_t>(std::floor(level * (n - 1)));
    const double x = sorted[k];
    const double frac = static_cast<double>(k + 1) / n;
    rep.rows.push_back(make_row("cdf", x, cdf(p, x), {frac, std::sqrt(frac * (1.0 - frac) / n)}));
  }

  if (!(p.q > 0.0)) {
    rep.skipped.push_back({"price", "prices need q > 0"});
  } else if (!finite_variance) {
    rep.skipped.push_back({"price", why_var});
  } else {
    const double m1 = moment(p, 1);
    for (double f : {0.5, 1.0, 2.0}) {
      const double K = f * m1;
      std::vector<double> pay(samples.I.size());
      std::transform(samples.I.begin(), samples.I.end(), pay.begin(),
                     [K](double x) { return std::max(x - K, 0.0); });
      rep.rows.push_back(make_row("price", K, price_asian(p, K), mean_estimate(pay)));
    }
  }
  return rep;
}

}  // namespace levyexp
