#pragma once

#include <string>

#include <json.hpp>

#include "levyexp/hypergeometric.hpp"
#include "levyexp/levy_model.hpp"
#include "levyexp/montecarlo.hpp"
#include "levyexp/rational_roots.hpp"

namespace levyexp {

using Json = nlohmann::ordered_json;

/// [re, im]; a plain number is read as a real value.
cplx complex_from_json(const Json& j);
Json complex_to_json(cplx z);

/// {"sigma", "mu", "positive_jumps": [{"rho": [re, im], "alphas": [[re, im], ...]}],
///  "negative_jumps": [...]}. Missing sigma, mu or jump lists default to zero / empty.
/// Throws UsageError for a malformed document. Does not validate the model.
LevyModel model_from_json(const Json& j);
Json model_to_json(const LevyModel& model);

/// Reads and parses a model file; throws UsageError when unreadable.
LevyModel load_model(const std::string& path);

/// {"q", "zeta": [[re, im], ...], "zeta_hat": [...]}
Json roots_to_json(const RootSet& roots);

Json validation_to_json(const ValidationReport& report);
Json assumptions_to_json(const AssumptionReport& report);
Json report_to_json(const McReport& report);

/// Fixed 17-significant-digit formatting used by every CSV writer.
std::string format_double(double v);

}  // namespace levyexp
