#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levygrad/bismut.hpp"
#include "levygrad/estimator.hpp"
#include "levygrad/validate.hpp"

namespace levygrad {

inline constexpr const char* kReportSchemaVersion = "1.0.0";
inline constexpr std::size_t kMaxCsvRows = 1000000;

nlohmann::json to_json(const EstimatorResult& result);
nlohmann::json to_json(const ComparisonReport& comparison);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const CounterexampleResult& result);
nlohmann::json to_json(const TruncationReport& report);

/// Assembles a report document. generated_at is omitted when empty.
nlohmann::json make_report(const std::string& command, const nlohmann::json& inputs, const nlohmann::json& results,
                           const std::vector<ComparisonReport>& comparisons, const nlohmann::json& diagnostics,
                           bool pass, const std::string& generated_at);

std::string utc_timestamp();

/// sample_index, f_value, weight, I1, I2, I3, normalizer; at most kMaxCsvRows rows.
/// Returns the number of rows written.
std::size_t write_samples_csv(const std::string& path, const std::vector<SampleRow>& rows);

}  // namespace levygrad
