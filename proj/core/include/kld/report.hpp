/// @file report.hpp
/// @brief JSON run reports and CSV exports.
///
/// Reports carry a `schema_version`. Doubles are written in shortest
/// round-trip form so a report reloads bit-exactly.

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kld/baselines.hpp"
#include "kld/detector.hpp"
#include "kld/evaluation.hpp"
#include "kld/generator.hpp"

namespace kld {

inline constexpr int kReportSchemaVersion = 1;

/// Shortest decimal that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

[[nodiscard]] nlohmann::ordered_json to_json(const DetectorConfig& config);
/// Missing keys keep their defaults; unknown keys are a UsageError.
[[nodiscard]] DetectorConfig detector_config_from_json(const nlohmann::ordered_json& j);

[[nodiscard]] nlohmann::ordered_json to_json(const GeneratorConfig& config);
[[nodiscard]] GeneratorConfig generator_config_from_json(const nlohmann::ordered_json& j);

[[nodiscard]] nlohmann::ordered_json to_json(const Grid& grid);
[[nodiscard]] nlohmann::ordered_json to_json(const MatchingResult& result);

[[nodiscard]] nlohmann::ordered_json to_json(const DriftReport& report);
/// Throws DataError on a malformed report or an unsupported schema version.
[[nodiscard]] DriftReport report_from_json(const nlohmann::ordered_json& j);

[[nodiscard]] nlohmann::ordered_json to_json(std::span<const SweepEntry> sweep);

/// `i,value_unweighted,value_weighted,skipped_bins`
void write_distances_csv(std::ostream& out, const DriftReport& report);
/// `k,raw,normalized,smoothed,gradient`; gradient is empty on the last row.
void write_series_csv(std::ostream& out, const DriftReport& report);
/// `alpha,detections,tp,fp,fn,mean_delay`
void write_sweep_csv(std::ostream& out, std::span<const SweepEntry> sweep);

struct EvaluationRow {
    std::string detector;
    std::size_t detections = 0;
    MatchingResult matching;
};
/// `detector,detections,tp,fp,fn,mean_delay`
void write_evaluation_csv(std::ostream& out, std::span<const EvaluationRow> rows);

}  // namespace kld
