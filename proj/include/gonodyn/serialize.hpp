#pragma once

#include <string>

#include "json.hpp"

#include "gonodyn/analysis.hpp"
#include "gonodyn/claims.hpp"
#include "gonodyn/model.hpp"

namespace gonodyn {

// Shortest round-trip double formatting for CSV output (17 significant digits).
std::string format_g17(double v);

// Report serialization. Tensor indices are emitted 1-based to match the
// file-format convention.
nlohmann::json to_json(const TensorValidationReport& report);
nlohmann::json to_json(const FixedPointRecord& record);
nlohmann::json to_json(const LimitReport& report);
nlohmann::json to_json(const Metric& metric);
nlohmann::json to_json(const ClaimReport& report);

}  // namespace gonodyn
