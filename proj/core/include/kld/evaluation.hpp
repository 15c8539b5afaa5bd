/// @file evaluation.hpp
/// @brief Matching detections to ground truth and the alpha sensitivity sweep.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kld/detector.hpp"

namespace kld {

struct MatchingResult {
    std::size_t tolerance = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  ///< (truth, detection) chunk indices
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    /// Mean of detection - truth over matched pairs; absent without pairs.
    std::optional<double> mean_delay;

    friend bool operator==(const MatchingResult&, const MatchingResult&) = default;
};

/// Greedy in-order matching: each detection takes the earliest unmatched
/// truth within `tolerance` chunks. Both lists must be strictly increasing
/// (DataError otherwise).
[[nodiscard]] MatchingResult match(std::span<const std::size_t> truth, std::span<const std::size_t> detections,
                                   std::size_t tolerance);

struct SweepEntry {
    double alpha = 0.0;
    std::size_t detections = 0;
    MatchingResult matching;
    std::vector<CriticalSegment> segments;
};

/// Re-decides `base` at every alpha (series shared) and scores each run
/// against base.meta.ground_truth.
[[nodiscard]] std::vector<SweepEntry> alpha_sweep(const DriftReport& base, std::span<const double> alphas,
                                                  std::size_t tolerance);

/// Batch detection once, then the sweep.
[[nodiscard]] std::vector<SweepEntry> alpha_sweep(std::span<const Chunk> chunks, const StreamMeta& meta,
                                                  const DetectorConfig& config, std::span<const double> alphas,
                                                  std::size_t tolerance);

/// Parses "start:stop:step" (inclusive stop, within half a step) or a
/// comma-separated list.
[[nodiscard]] std::vector<double> parse_alphas(const std::string& text);

}  // namespace kld
