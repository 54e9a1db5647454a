#include "gonodyn/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace gonodyn {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const TensorValidationReport& report) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"i", v.i + 1},
                          {"p", v.p + 1},
                          {"row_sum", v.row_sum},
                          {"min_entry", v.min_entry}});
  return {{"pass", report.pass},
          {"max_row_sum_error", report.max_row_sum_error},
          {"min_entry", report.min_entry},
          {"violations", violations}};
}

nlohmann::json to_json(const FixedPointRecord& record) {
  nlohmann::json out = {{"u", record.u.u},
                        {"residual", record.residual},
                        {"classification", to_string(record.classification)},
                        {"spectrum", record.spectrum}};
  if (record.slope) out["slope"] = *record.slope;
  return out;
}

nlohmann::json to_json(const LimitReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& pt : report.points) points.push_back(pt.u);
  return {{"kind", to_string(report.kind)},
          {"period", report.period},
          {"points", points},
          {"steps_used", report.steps_used},
          {"final_gap", report.final_gap},
          {"boundary_gap", report.boundary_gap}};
}

nlohmann::json to_json(const Metric& metric) {
  nlohmann::json out = {{"name", metric.name}, {"value", metric.value}, {"ok", metric.ok}};
  if (std::isnan(metric.tolerance))
    out["tolerance"] = nullptr;
  else
    out["tolerance"] = metric.tolerance;
  return out;
}

nlohmann::json to_json(const ClaimReport& report) {
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& m : report.metrics) metrics.push_back(to_json(m));
  return {{"id", report.id},
          {"description", report.description},
          {"pass", report.pass},
          {"quarantined", report.quarantined},
          {"evidence_only", report.evidence_only},
          {"metrics", metrics},
          {"notes", report.notes}};
}

}  // namespace gonodyn
