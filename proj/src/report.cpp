#include "levygrad/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace levygrad {

namespace {

nlohmann::json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

}  // namespace

nlohmann::json to_json(const EstimatorResult& result) {
  nlohmann::json diagnostics = nlohmann::json::object();
  for (const auto& [key, value] : result.diagnostics) diagnostics[key] = number(value);
  return {{"mean", number(result.mean)},
          {"std_error", number(result.std_error)},
          {"n_samples", result.n_samples},
          {"n_rejected", result.n_rejected},
          {"valid", result.valid},
          {"diagnostics", diagnostics}};
}

nlohmann::json to_json(const ComparisonReport& c) {
  nlohmann::json out{{"label", c.label},
                     {"kind", c.kind == ComparisonReport::Kind::kEqual ? "equal" : "greater"},
                     {"lhs", to_json(c.lhs)},
                     {"rhs_value", number(c.rhs_value)},
                     {"difference", number(c.difference)},
                     {"combined_se", number(c.combined_se)},
                     {"z_score", number(c.z_score)},
                     {"threshold", c.threshold},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass}};
  out["rhs"] = c.rhs_estimate ? to_json(*c.rhs_estimate) : nlohmann::json(nullptr);
  return out;
}

nlohmann::json to_json(const BoundReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const BoundPoint& p : report.points) {
    points.push_back({{"t", p.t},
                      {"eps_cut", p.eps_cut},
                      {"gradient", to_json(p.gradient)},
                      {"power_mean", to_json(p.power_mean)},
                      {"ratio", number(p.ratio)},
                      {"ratio_se", number(p.ratio_se)},
                      {"scaled_ratio", number(p.scaled_ratio)}});
  }
  return {{"points", points},
          {"slope", number(report.slope)},
          {"slope_se", number(report.slope_se)},
          {"intercept", number(report.intercept)},
          {"expected_slope", report.expected_slope},
          {"slope_tolerance", report.slope_tolerance},
          {"c_estimate", number(report.c_estimate)},
          {"complete", report.complete},
          {"pass", report.pass}};
}

nlohmann::json to_json(const CounterexampleResult& result) {
  return {{"jump_moment", to_json(result.jump_moment)},
          {"mollified_moment", to_json(result.mollified_moment)},
          {"jump_target", result.jump_target},
          {"mollified_target", result.mollified_target},
          {"lower_bound", result.lower_bound}};
}

nlohmann::json to_json(const TruncationReport& report) {
  nlohmann::json steps = nlohmann::json::array();
  for (const TruncationStep& s : report.steps) {
    steps.push_back({{"eps", s.eps},
                     {"kept_jumps", s.kept_jumps},
                     {"dropped_mass", s.dropped_mass},
                     {"exact", s.exact},
                     {"discrepancy", to_json(s.discrepancy)},
                     {"pass", s.comparison.pass},
                     {"z_score", number(s.comparison.z_score)}});
  }
  return {{"steps", steps}, {"nonincreasing", report.nonincreasing}, {"pass", report.pass}};
}

nlohmann::json make_report(const std::string& command, const nlohmann::json& inputs, const nlohmann::json& results,
                           const std::vector<ComparisonReport>& comparisons, const nlohmann::json& diagnostics,
                           bool pass, const std::string& generated_at) {
  nlohmann::json out{{"schema_version", kReportSchemaVersion},
                     {"command", command},
                     {"inputs", inputs},
                     {"results", results.is_null() ? nlohmann::json::object() : results},
                     {"diagnostics", diagnostics.is_null() ? nlohmann::json::object() : diagnostics},
                     {"pass", pass}};
  nlohmann::json list = nlohmann::json::array();
  for (const ComparisonReport& c : comparisons) list.push_back(to_json(c));
  out["comparisons"] = list;
  if (!generated_at.empty()) out["generated_at"] = generated_at;
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::size_t write_samples_csv(const std::string& path, const std::vector<SampleRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "sample_index,f_value,weight,I1,I2,I3,normalizer\n";
  const std::size_t n = std::min(rows.size(), kMaxCsvRows);
  char line[256];
  for (std::size_t i = 0; i < n; ++i) {
    const SampleRow& r = rows[i];
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.sample_index, r.f_value,
                  r.weight, r.i1, r.i2, r.i3, r.normalizer);
    out << line;
  }
  if (!out) throw std::runtime_error("failed writing " + path);
  return n;
}

}  // namespace levygrad
