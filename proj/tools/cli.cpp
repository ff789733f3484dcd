#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "levyexp/density.hpp"
#include "levyexp/errors.hpp"
#include "levyexp/io.hpp"
#include "levyexp/mellin.hpp"
#include "levyexp/montecarlo.hpp"
#include "levyexp/rational_roots.hpp"

namespace levyexp::cli {
namespace {

struct Options {
  std::string model_path;
  double q = 0.0;
  std::string grid;
  std::vector<double> s_values;
  double s_imag = 0.0;
  std::vector<double> strikes;
  std::vector<int> orders{1};
  std::optional<double> contour;
  long paths = 100000;
  std::uint64_t seed = 12345;
  double step = 0.0;
  int threads = 0;
  std::string out = "csv";
  double tol = 1e-10;
  bool report = false;
  std::string mc_report;
};

int exit_for(ErrorClass c) {
  switch (c) {
    case ErrorClass::validation: return validation_failure;
    case ErrorClass::numerical: return numerical_failure;
    case ErrorClass::usage: return usage_error;
  }
  return numerical_failure;
}

const char* class_name(ErrorClass c) {
  switch (c) {
    case ErrorClass::validation: return "validation";
    case ErrorClass::numerical: return "numerical";
    case ErrorClass::usage: return "usage";
  }
  return "numerical";
}

void print_error(std::ostream& err, const std::string& kind, ErrorClass cls, const std::string& msg) {
  err << Json{{"error", kind}, {"class", class_name(cls)}, {"message", msg}}.dump() << '\n';
}

// Evaluates f(i) for i < n on all hardware threads; the result is independent
// of the thread count. The first exception is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<T> out(n);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  std::vector<std::exception_ptr> errors(std::max(1u, threads));
  auto work = [&](unsigned k) {
    try {
      for (std::size_t i = k; i < n; i += threads) out[i] = f(i);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work, k);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

struct Row {
  double x = 0.0;
  double value = std::numeric_limits<double>::quiet_NaN();
  double abs_err = std::numeric_limits<double>::quiet_NaN();
  std::string mode;
};

// A per-point library error becomes a row with mode "error:<kind>".
template <class F>
Row guarded(double x, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    Row r;
    r.x = x;
    r.mode = "error:" + e.kind();
    return r;
  }
}

MellinParams load_params(const Options& o) {
  const LevyModel m = load_model(o.model_path);
  return make_params(m, o.q);
}

std::vector<double> grid_or_list(const Options& o, const std::vector<double>& list, const char* what) {
  if (!o.grid.empty()) return parse_grid(o.grid);
  if (!list.empty()) return list;
  throw UsageError(std::string("give --grid or ") + what);
}

Json summary(const MellinParams& p) {
  Json s;
  try {
    const QuadratureValue n = normalization(p);
    s["normalization_check"] = {{"value", n.value},
                                {"abs_err", n.abs_err},
                                {"pass", std::abs(n.value - 1.0) <= 1e-6}};
  } catch (const Error& e) {
    s["normalization_check"] = {{"error", e.kind()}, {"message", e.what()}};
  }
  s["tail_exponent"] = tail_exponent(p);
  return s;
}

void emit_rows(std::ostream& out, const Options& o, const char* x_name, const std::vector<Row>& rows,
               const MellinParams& p) {
  if (o.out == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back({{x_name, r.x}, {"value", r.value}, {"abs_err", r.abs_err}, {"mode", r.mode}});
    }
    out << Json{{"rows", std::move(arr)}, {"summary", summary(p)}}.dump(2) << '\n';
    return;
  }
  out << x_name << ",value,abs_err,mode\n";
  for (const auto& r : rows) {
    out << format_double(r.x) << ',' << format_double(r.value) << ',' << format_double(r.abs_err)
        << ',' << r.mode << '\n';
  }
}

int cmd_validate(const Options& o, std::ostream& out) {
  const LevyModel m = load_model(o.model_path);
  const ValidationReport rep = validate(m);
  Json j = validation_to_json(rep);
  if (rep.ok()) {
    j["model_case"] = to_string(model_case(m));
    j["jump_intensity"] = jump_intensity(m);
    j["mean"] = mean(m);
  }
  out << j.dump(2) << '\n';
  return rep.ok() ? ok : validation_failure;
}

int cmd_roots(const Options& o, std::ostream& out) {
  const LevyModel m = load_model(o.model_path);
  require_valid(m);
  const RootSet rs = solve(m, o.q);
  const auto [K, Kh] = expected_root_counts(m);
  const AssumptionReport a = check_assumptions(m, rs);
  Json j = roots_to_json(rs);
  j["model_case"] = to_string(model_case(m));
  j["counts"] = {{"K", rs.K()},
                 {"K_hat", rs.K_hat()},
                 {"expected_K", K},
                 {"expected_K_hat", Kh},
                 {"pass", rs.K() == K && rs.K_hat() == Kh}};
  j["theta"] = cramer_abscissa(rs);
  j["assumptions"] = assumptions_to_json(a);
  out << j.dump(2) << '\n';
  return ok;
}

int cmd_mellin(const Options& o, std::ostream& out) {
  const MellinParams p = load_params(o);
  const auto s = grid_or_list(o, o.s_values, "--s");
  if (o.out == "json") {
    Json arr = Json::array();
    for (double re : s) {
      const cplx v = mellin_transform(p, cplx(re, o.s_imag));
      arr.push_back({{"s", complex_to_json({re, o.s_imag})}, {"M", complex_to_json(v)}});
    }
    out << Json{{"rows", std::move(arr)}}.dump(2) << '\n';
    return ok;
  }
  out << "re_s,im_s,re_M,im_M\n";
  for (double re : s) {
    const cplx v = mellin_transform(p, cplx(re, o.s_imag));
    out << format_double(re) << ',' << format_double(o.s_imag) << ',' << format_double(v.real())
        << ',' << format_double(v.imag()) << '\n';
  }
  return ok;
}

int cmd_density(const Options& o, std::ostream& out) {
  const MellinParams p = load_params(o);
  const GVectors gv = build_vectors(p);
  const auto xs = grid_or_list(o, {}, "a grid");
  DensityOptions dopt;
  dopt.tol = o.tol;
  const auto rows = parallel_map<Row>(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    return guarded(x, [&] {
      if (o.contour) {
        InversionOptions io;
        io.c = *o.contour;
        const InversionResult r = invert_density(p, x, io);
        return Row{x, r.value, r.abs_err, to_string(SeriesMode::inversion)};
      }
      const SeriesEval e = density(p, gv, x, dopt);
      return Row{x, e.value.real(), e.abs_err, to_string(e.mode)};
    });
  });
  emit_rows(out, o, "x", rows, p);
  return ok;
}

int cmd_cdf(const Options& o, std::ostream& out) {
  const MellinParams p = load_params(o);
  const auto xs = grid_or_list(o, {}, "a grid");
  const auto rows = parallel_map<Row>(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    return guarded(x, [&] {
      const QuadratureValue v = cdf_with_error(p, x);
      return Row{x, v.value, v.abs_err, "quadrature"};
    });
  });
  emit_rows(out, o, "x", rows, p);
  return ok;
}

int cmd_price(const Options& o, std::ostream& out) {
  const MellinParams p = load_params(o);
  const auto ks = grid_or_list(o, o.strikes, "--strikes");
  const auto rows = parallel_map<Row>(ks.size(), [&](std::size_t i) {
    const double k = ks[i];
    return guarded(k, [&] {
      const QuadratureValue v = price_with_error(p, k);
      return Row{k, v.value, v.abs_err, "quadrature"};
    });
  });
  emit_rows(out, o, "strike", rows, p);
  return ok;
}

int cmd_moment(const Options& o, std::ostream& out) {
  const MellinParams p = load_params(o);
  if (o.out == "json") {
    Json arr = Json::array();
    for (int n : o.orders) arr.push_back({{"n", n}, {"value", moment(p, n)}});
    out << Json{{"rows", std::move(arr)}}.dump(2) << '\n';
    return ok;
  }
  out << "n,value\n";
  for (int n : o.orders) out << n << ',' << format_double(moment(p, n)) << '\n';
  return ok;
}

McConfig mc_config(const Options& o) {
  McConfig c;
  c.paths = o.paths;
  c.seed = o.seed;
  c.diffusion_step = o.step;
  c.threads = o.threads;
  return c;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const LevyModel m = load_model(o.model_path);
  const McConfig cfg = mc_config(o);
  if (o.report) {
    const MellinParams p = make_params(m, o.q);
    out << report_to_json(compare_report(m, o.q, cfg, p)).dump(2) << '\n';
    return ok;
  }
  const auto samples = simulate_exponential_functional(m, o.q, cfg);
  if (o.out == "binary") {
    out.write(reinterpret_cast<const char*>(samples.data()),
              static_cast<std::streamsize>(samples.size() * sizeof(double)));
  } else if (o.out == "json") {
    out << Json{{"samples", samples}}.dump() << '\n';
  } else {
    out << "I\n";
    for (double v : samples) out << format_double(v) << '\n';
  }
  return ok;
}

// exp(E[log I_q]) from the slope of log M at s = 1; a natural scale for grids.
double geometric_scale(const MellinParams& p) {
  const double h = 1e-4 * std::min(1.0, p.theta);
  const double up = std::log(mellin_transform(p, 1.0 + h).real());
  const double dn = std::log(mellin_transform(p, 1.0 - h).real());
  return std::exp((up - dn) / (2.0 * h));
}

Json check_entry(const std::string& name, bool pass, Json detail) {
  return {{"name", name}, {"pass", pass}, {"detail", std::move(detail)}};
}

McReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open McReport file " + path);
  Json j;
  try {
    j = Json::parse(in);
    McReport r;
    r.model_case = j.at("model_case").get<std::string>();
    r.q = j.at("q").get<double>();
    r.paths = j.at("paths").get<long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.step = j.value("diffusion_step", 0.0);
    for (const auto& row : j.at("rows")) {
      McRow x;
      x.statistic = row.at("statistic").get<std::string>();
      x.parameter = row.at("parameter").get<double>();
      x.analytic = row.at("analytic").get<double>();
      x.mc = row.at("mc").get<double>();
      x.std_error = row.at("std_error").get<double>();
      x.z = row.at("z").is_number() ? row.at("z").get<double>() : std::numeric_limits<double>::infinity();
      x.flagged = !(std::abs(x.z) <= 3.0);
      r.rows.push_back(x);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("McReport file " + path + ": " + e.what());
  }
}

int cmd_check(const Options& o, std::ostream& out) {
  const LevyModel m = load_model(o.model_path);
  Json checks = Json::array();
  bool all = true;
  auto add = [&](const std::string& name, bool pass, Json detail) {
    all = all && pass;
    checks.push_back(check_entry(name, pass, std::move(detail)));
  };

  const ValidationReport vr = validate(m);
  add("model_valid", vr.ok(), validation_to_json(vr));
  if (!vr.ok()) {
    out << Json{{"all_pass", false}, {"checks", std::move(checks)}}.dump(2) << '\n';
    return validation_failure;
  }
  const RootSet rs = solve(m, o.q);
  const auto [K, Kh] = expected_root_counts(m);
  add("root_counts", rs.K() == K && rs.K_hat() == Kh,
      {{"K", rs.K()}, {"K_hat", rs.K_hat()}, {"expected_K", K}, {"expected_K_hat", Kh}});
  const AssumptionReport ar = check_assumptions(m, rs);
  add("assumptions", ar.all_passed(), assumptions_to_json(ar));
  if (!ar.all_passed()) {
    out << Json{{"all_pass", false}, {"checks", std::move(checks)}}.dump(2) << '\n';
    return validation_failure;
  }
  const MellinParams p = build_params(m, o.q, rs);

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double fe = 0.0;
  for (int i = 0; i < 50; ++i) {
    const cplx s(p.theta * (0.02 + 0.96 * unit(rng)), 4.0 * unit(rng) - 2.0);
    const cplx lhs = mellin_transform(p, s + 1.0);
    const cplx rhs = mellin_transform(p, s) * recurrence_ratio(p, s);
    fe = std::max(fe, std::abs(lhs - rhs) / std::abs(lhs));
  }
  add("functional_equation", fe < 1e-10, {{"max_rel_err", fe}, {"points", 50}});

  double fz = 0.0;
  for (int i = 0; i < 50; ++i) {
    const cplx s(6.0 * unit(rng) - 3.0, 6.0 * unit(rng) - 3.0);
    try {
      const cplx a = recurrence_ratio(p, s);
      const cplx b = recurrence_ratio_factorized(p, s);
      fz = std::max(fz, std::abs(a - b) / std::abs(a));
    } catch (const PoleError&) {
    }
  }
  add("factorization", fz < 1e-10, {{"max_rel_err", fz}, {"points", 50}});

  const QuadratureValue nq = normalization(p);
  add("normalization", std::abs(nq.value - 1.0) <= 1e-6, {{"value", nq.value}, {"abs_err", nq.abs_err}});

  const double g = geometric_scale(p);
  const GVectors gv = build_vectors(p);
  double sv = 0.0;
  int used = 0;
  for (int i = 0; i < 10; ++i) {
    const double x = g * std::exp(-3.0 + 6.0 * i / 9.0);
    if (p.model_case == ModelCase::drift_only && std::abs(p.A * x - 1.0) < 0.02) continue;
    const double a = density(p, gv, x).value.real();
    const double b = density_via_inversion(p, x, auto_contour(p, x));
    sv = std::max(sv, std::abs(a - b) / std::abs(b));
    ++used;
  }
  add("series_vs_inversion", sv < 1e-8, {{"max_rel_err", sv}, {"points", used}});

  if (!o.mc_report.empty() || o.paths > 0) {
    McReport rep;
    if (!o.mc_report.empty()) {
      rep = read_report(o.mc_report);
    } else {
      McConfig cfg = mc_config(o);
      rep = compare_report(m, o.q, cfg, p);
      if (!rep.all_pass()) {
        cfg.seed = o.seed + 1;
        rep = compare_report(m, o.q, cfg, p);
      }
    }
    add("monte_carlo", rep.all_pass(), report_to_json(rep));
  }

  out << Json{{"all_pass", all}, {"checks", std::move(checks)}}.dump(2) << '\n';
  return all ? ok : validation_failure;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log")) {
    throw UsageError("grid must be MIN:MAX:N[:log], got " + spec);
  }
  double lo = 0.0, hi = 0.0;
  long n = 0;
  try {
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("min");
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("max");
    n = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("n");
  } catch (const std::exception&) {
    throw UsageError("grid must be MIN:MAX:N[:log], got " + spec);
  }
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw UsageError("grid bounds must be positive and increasing, got " + spec);
  }
  if (n < 1) throw UsageError("grid size must be >= 1, got " + spec);
  const bool log = parts.size() == 4;
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    g[static_cast<std::size_t>(i)] =
        log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  g.front() = lo;
  if (n > 1) g.back() = hi;
  return g;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponential functionals of Levy processes with rational Laplace exponent"};
  app.require_subcommand(1);
  Options o;

  auto model = [&](CLI::App* c) {
    c->add_option("--model", o.model_path, "model JSON file")->required()->check(CLI::ExistingFile);
  };
  auto with_q = [&](CLI::App* c) {
    c->add_option("--q", o.q, "killing rate q >= 0")->required()->check(CLI::NonNegativeNumber);
  };
  auto out_fmt = [&](CLI::App* c, std::vector<std::string> formats) {
    c->add_option("--out", o.out, "output format")->check(CLI::IsMember(formats));
  };
  auto mc = [&](CLI::App* c) {
    c->add_option("--paths", o.paths, "Monte Carlo paths")->check(CLI::NonNegativeNumber);
    c->add_option("--seed", o.seed, "Monte Carlo seed");
    c->add_option("--step", o.step, "diffusion step h (default 0.005 / max(1, q))");
    c->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check the model invariants");
  model(validate_cmd);

  auto* roots_cmd = app.add_subcommand("roots", "roots of psi(z) = q, counts and assumption audit");
  model(roots_cmd);
  with_q(roots_cmd);

  auto* mellin_cmd = app.add_subcommand("mellin", "M(s) = E[I_q^{s-1}] on an s grid");
  model(mellin_cmd);
  with_q(mellin_cmd);
  mellin_cmd->add_option("--s", o.s_values, "real parts of s")->delimiter(',');
  mellin_cmd->add_option("--grid", o.grid, "MIN:MAX:N[:log] for Re s");
  mellin_cmd->add_option("--imag", o.s_imag, "common imaginary part of s");
  out_fmt(mellin_cmd, {"csv", "json"});

  auto* density_cmd = app.add_subcommand("density", "density of I_q on an x grid");
  model(density_cmd);
  with_q(density_cmd);
  density_cmd->add_option("--grid", o.grid, "MIN:MAX:N[:log]")->required();
  density_cmd->add_option("--tol", o.tol, "relative tolerance")->check(CLI::PositiveNumber);
  density_cmd->add_option("--contour", o.contour, "use Mellin inversion on Re s = C");
  out_fmt(density_cmd, {"csv", "json"});

  auto* cdf_cmd = app.add_subcommand("cdf", "P(I_q <= x) on an x grid");
  model(cdf_cmd);
  with_q(cdf_cmd);
  cdf_cmd->add_option("--grid", o.grid, "MIN:MAX:N[:log]")->required();
  out_fmt(cdf_cmd, {"csv", "json"});

  auto* moment_cmd = app.add_subcommand("moment", "E[I_q^n]");
  model(moment_cmd);
  with_q(moment_cmd);
  moment_cmd->add_option("--n", o.orders, "orders")->delimiter(',');
  out_fmt(moment_cmd, {"csv", "json"});

  auto* price_cmd = app.add_subcommand("price", "E[(I_q - K)^+] over strikes");
  model(price_cmd);
  with_q(price_cmd);
  price_cmd->add_option("--strikes", o.strikes, "strikes K >= 0")->delimiter(',');
  price_cmd->add_option("--grid", o.grid, "MIN:MAX:N[:log] for strikes");
  out_fmt(price_cmd, {"csv", "json"});

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo samples of I_q");
  model(simulate_cmd);
  with_q(simulate_cmd);
  mc(simulate_cmd);
  simulate_cmd->add_flag("--report", o.report, "emit the analytic-vs-Monte-Carlo report as JSON");
  out_fmt(simulate_cmd, {"csv", "json", "binary"});

  auto* check_cmd = app.add_subcommand("check", "full invariant suite; exit 0 iff all pass");
  model(check_cmd);
  with_q(check_cmd);
  mc(check_cmd);
  check_cmd->add_option("--mc-report", o.mc_report, "use this McReport JSON instead of simulating");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", ErrorClass::usage, e.what());
    return usage_error;
  }

  try {
    if (check_cmd->parsed() && check_cmd->count("--paths") == 0) o.paths = 20000;
    if (validate_cmd->parsed()) return cmd_validate(o, out);
    if (roots_cmd->parsed()) return cmd_roots(o, out);
    if (mellin_cmd->parsed()) return cmd_mellin(o, out);
    if (density_cmd->parsed()) return cmd_density(o, out);
    if (cdf_cmd->parsed()) return cmd_cdf(o, out);
    if (moment_cmd->parsed()) return cmd_moment(o, out);
    if (price_cmd->parsed()) return cmd_price(o, out);
    if (simulate_cmd->parsed()) return cmd_simulate(o, out);
    if (check_cmd->parsed()) return cmd_check(o, out);
  } catch (const Error& e) {
    print_error(err, e.kind(), e.error_class(), e.what());
    return exit_for(e.error_class());
  } catch (const std::exception& e) {
    print_error(err, "internal", ErrorClass::numerical, e.what());
    return numerical_failure;
  }
  print_error(err, "usage", ErrorClass::usage, "no subcommand");
  return usage_error;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"levyexp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace levyexp::cli
