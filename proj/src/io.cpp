#include "levyexp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "levyexp/errors.hpp"

namespace levyexp {
namespace {

std::vector<JumpTerm> terms_from_json(const Json& j, const char* side) {
  std::vector<JumpTerm> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw UsageError(std::string(side) + " must be an array");
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("rho") || !t.contains("alphas")) {
      throw UsageError(std::string(side) + " entries need \"rho\" and \"alphas\"");
    }
    JumpTerm term;
    term.rho = complex_from_json(t.at("rho"));
    const auto& a = t.at("alphas");
    if (!a.is_array() || a.empty()) throw UsageError("\"alphas\" must be a non-empty array");
    for (const auto& x : a) term.alphas.push_back(complex_from_json(x));
    out.push_back(std::move(term));
  }
  return out;
}

Json terms_to_json(const std::vector<JumpTerm>& terms) {
  Json arr = Json::array();
  for (const auto& t : terms) {
    Json a = Json::array();
    for (const auto& x : t.alphas) a.push_back(complex_to_json(x));
    arr.push_back({{"rho", complex_to_json(t.rho)}, {"alphas", std::move(a)}});
  }
  return arr;
}

double number(const Json& j, const char* name) {
  if (j.is_null()) return 0.0;
  if (!j.is_number()) throw UsageError(std::string("\"") + name + "\" must be a number");
  return j.get<double>();
}

}  // namespace

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw UsageError("expected a number or [re, im], got " + j.dump());
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

LevyModel model_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("model JSON must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "sigma" && key != "mu" && key != "positive_jumps" && key != "negative_jumps") {
      throw UsageError("unknown model field \"" + key + "\"");
    }
  }
  LevyModel m;
  m.sigma = number(j.value("sigma", Json()), "sigma");
  m.mu = number(j.value("mu", Json()), "mu");
  m.positive_jumps = terms_from_json(j.value("positive_jumps", Json()), "positive_jumps");
  m.negative_jumps = terms_from_json(j.value("negative_jumps", Json()), "negative_jumps");
  return m;
}

Json model_to_json(const LevyModel& model) {
  return {{"sigma", model.sigma},
          {"mu", model.mu},
          {"positive_jumps", terms_to_json(model.positive_jumps)},
          {"negative_jumps", terms_to_json(model.negative_jumps)}};
}

LevyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open model file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("model file " + path + ": " + e.what());
  }
  return model_from_json(j);
}

Json roots_to_json(const RootSet& roots) {
  Json z = Json::array(), zh = Json::array();
  for (const auto& r : roots.zeta) z.push_back(complex_to_json(r));
  for (const auto& r : roots.zeta_hat) zh.push_back(complex_to_json(r));
  return {{"q", roots.q}, {"zeta", std::move(z)}, {"zeta_hat", std::move(zh)}};
}

Json validation_to_json(const ValidationReport& report) {
  Json v = Json::array();
  for (const auto& x : report.violations) v.push_back({{"code", x.code}, {"message", x.message}});
  return {{"valid", report.ok()}, {"violations", std::move(v)}};
}

Json assumptions_to_json(const AssumptionReport& report) {
  Json c = Json::array();
  for (const auto& x : report.checks) {
    c.push_back({{"id", x.id}, {"passed", x.passed}, {"warning", x.warning}, {"detail", x.detail}});
  }
  return {{"all_passed", report.all_passed()}, {"checks", std::move(c)}};
}

Json report_to_json(const McReport& report) {
  Json rows = Json::array(), skipped = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"statistic", r.statistic},
                    {"parameter", r.parameter},
                    {"analytic", r.analytic},
                    {"mc", r.mc},
                    {"std_error", r.std_error},
                    {"z", r.z},
                    {"flagged", r.flagged}});
  }
  for (const auto& s : report.skipped) skipped.push_back({{"statistic", s.statistic}, {"reason", s.reason}});
  return {{"model_case", report.model_case},
          {"q", report.q},
          {"paths", report.paths},
          {"seed", report.seed},
          {"diffusion_step", report.step},
          {"max_abs_z", report.max_abs_z()},
          {"all_pass", report.all_pass()},
          {"rows", std::move(rows)},
          {"skipped", std::move(skipped)}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace levyexp
