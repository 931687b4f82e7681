#pragma once

#include <vector>

#include "json.hpp"
#include "winfree/analysis.hpp"
#include "winfree/sweep.hpp"

namespace winfree {

// Bumped whenever a field is renamed or removed; additions keep the version.
inline constexpr int kSchemaVersion = 1;

[[nodiscard]] nlohmann::json threshold_json(const ThresholdReport& report);
[[nodiscard]] nlohmann::json verify_json(const std::vector<VerifyItem>& items);
[[nodiscard]] nlohmann::json curves_json(const CriticalCurves& curves);
[[nodiscard]] nlohmann::json classification_json(const ClassificationResult& result);

// Post-run summary: classification plus the functionals of the final sample.
[[nodiscard]] nlohmann::json simulation_summary_json(const Trace& trace, const Model& model,
                                                     const ClassificationResult& result);

}  // namespace winfree
