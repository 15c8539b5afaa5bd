/// @file detector.hpp
/// @brief KL-divergence drift detector: online loop, decision band and report.
///
/// For every consecutive chunk pair (S_i, S_{i+1}) the detector estimates
/// per-bin class pmfs on a shared grid, aggregates the per-bin KL divergences
/// into D_i, smooths the sequence D and differentiates it. A gradient point is
/// critical when it leaves the band mean +/- alpha * sigma of the gradient
/// history. Consecutive critical points form a segment; the segment enter is
/// the reported drift timestamp.
///
/// Timestamps are chunk indices. D_i becomes known when chunk i+1 arrives and
/// gradient point l_k = s_{k+1} - s_k when chunk k+2 arrives, so l_k is
/// reported at chunk k+2.

#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kld/divergence.hpp"
#include "kld/partition.hpp"
#include "kld/smoothing.hpp"
#include "kld/stream.hpp"

namespace kld {

enum class GridScope { per_pair, global };
/// Which band edge makes a point critical: only the upper bound (rising
/// divergence) or either bound.
enum class BandSide { upper, both };

[[nodiscard]] std::string_view to_string(GridScope scope);
[[nodiscard]] GridScope grid_scope_from_string(std::string_view text);
[[nodiscard]] std::string_view to_string(BandSide side);
[[nodiscard]] BandSide band_side_from_string(std::string_view text);

struct DetectorConfig {
    double alpha = 1.5;
    double epsilon = 1e-6;
    GridMode bins_mode = GridMode::slab;
    std::size_t bins_per_dim = 5;
    SmootherSpec smoother{};
    /// Trailing window for the band mean/sigma; nullopt uses the full history.
    std::optional<std::size_t> stats_window;
    GridScope grid_scope = GridScope::per_pair;
    /// Gradient points required before the decision rule activates.
    std::size_t warmup = 10;
    Weighting weighting = Weighting::weighted;
    /// Keep the 1/J' factor in the weighted aggregate.
    bool jay_factor = true;
    BandSide band_side = BandSide::upper;

    /// Throws UsageError on out-of-range parameters.
    void validate() const;

    friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

struct Band {
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] bool outside(double value, BandSide side) const noexcept {
        return value > upper || (side == BandSide::both && value < lower);
    }
    friend bool operator==(const Band&, const Band&) = default;
};

/// Running mean and population standard deviation of the gradient history,
/// either cumulative or over a trailing window.
class BandStatistics {
public:
    explicit BandStatistics(std::optional<std::size_t> window = std::nullopt);

    void push(double value);
    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] double mean() const;
    [[nodiscard]] double stddev() const;
    /// mean +/- max(alpha * sigma, 1e-12).
    [[nodiscard]] Band band(double alpha) const;

private:
    std::optional<std::size_t> window_;
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    std::deque<double> recent_;
};

/// Band at every index k, computed from l[0..=k] (or its trailing window).
[[nodiscard]] std::vector<Band> decision_band(std::span<const double> gradient, double alpha,
                                              std::optional<std::size_t> stats_window = std::nullopt);

struct CriticalSegment {
    std::size_t enter = 0;
    std::optional<std::size_t> exit;  ///< absent while still outside at stream end
    friend bool operator==(const CriticalSegment&, const CriticalSegment&) = default;
};

/// Decision-rule state machine fed one gradient point at a time.
class DecisionRule {
public:
    struct Outcome {
        Band band;
        bool active = false;   ///< warmup satisfied
        bool outside = false;  ///< critical point
        bool opened = false;   ///< a segment started here
        bool closed = false;   ///< the open segment ended here
    };

    DecisionRule(double alpha, std::optional<std::size_t> stats_window, std::size_t warmup, BandSide side);

    Outcome push(double gradient, std::size_t timestamp);

    [[nodiscard]] const std::vector<CriticalSegment>& segments() const noexcept { return segments_; }

private:
    double alpha_;
    std::size_t warmup_;
    BandSide side_;
    BandStatistics stats_;
    std::vector<CriticalSegment> segments_;
    std::size_t seen_ = 0;
    bool open_ = false;
};

/// Per-pair series entry.
struct DistanceRow {
    std::size_t k = 0;  ///< pair (k, k+1)
    double value = 0.0;  ///< the tracked value (weighted or unweighted per config)
    double unweighted = 0.0;
    double weighted = 0.0;
    std::size_t skipped_bins = 0;
    std::size_t compared_bins = 0;
    bool gap = false;  ///< no comparable bins; value carried from the previous pair

    friend bool operator==(const DistanceRow&, const DistanceRow&) = default;
};

struct Diagnostic {
    std::size_t chunk = 0;
    std::string message;
    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct DriftReport {
    DetectorConfig config;
    StreamMeta meta;
    std::size_t chunks_seen = 0;
    std::size_t dropped_records = 0;
    std::optional<Grid> global_grid;

    std::vector<DistanceRow> rows;
    std::vector<double> smoothed;   ///< smoother applied to the tracked raw values
    std::vector<double> gradient;   ///< first difference of smoothed
    std::vector<Band> bands;        ///< per gradient index
    std::vector<unsigned char> active;
    std::vector<unsigned char> outside;

    std::vector<CriticalSegment> segments;
    std::vector<std::size_t> critical_points;  ///< segment enters
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] std::vector<double> raw_values() const;
    /// Plot columns: raw, global min-max normalized, smoothed and gradient on
    /// the normalized scale.
    [[nodiscard]] DivergenceSeries plot_series() const;

    friend bool operator==(const DriftReport&, const DriftReport&) = default;
};

/// Distance between two consecutive chunks. With a null `global_grid` a grid
/// is fitted to the union bounds of the pair. Returns nullopt when no bin is
/// occupied in both chunks.
[[nodiscard]] std::optional<ChunkDistance> chunk_distance(const Chunk& reference, const Chunk& next,
                                                          const DetectorConfig& config, std::size_t classes,
                                                          const std::shared_ptr<const Grid>& global_grid = nullptr);

/// Online detector: push chunks as they arrive.
class Detector {
public:
    struct Step {
        std::size_t chunk = 0;
        std::optional<DistanceRow> distance;
        std::optional<double> normalized;  ///< running min-max of the tracked value
        std::optional<double> gradient;
        std::optional<DecisionRule::Outcome> decision;
    };
    using SegmentCallback = std::function<void(const CriticalSegment&)>;

    /// `global_bounds` fixes the grid in global scope; without it the grid is
    /// fitted to the first chunk.
    Detector(DetectorConfig config, StreamMeta meta, std::optional<Bounds> global_bounds = std::nullopt);

    Step push(const Chunk& chunk);

    /// Invoked whenever a new critical segment opens.
    void on_segment_open(SegmentCallback callback) { callback_ = std::move(callback); }

    [[nodiscard]] DriftReport report() const;
    [[nodiscard]] const DetectorConfig& config() const noexcept { return config_; }

private:
    DetectorConfig config_;
    StreamMeta meta_;
    std::optional<Bounds> global_bounds_;
    std::shared_ptr<const Grid> global_grid_;
    std::optional<Chunk> previous_;
    std::size_t seen_ = 0;

    std::vector<DistanceRow> rows_;
    std::vector<double> values_;
    std::vector<double> smoothed_;
    std::vector<double> gradient_;
    std::vector<Band> bands_;
    std::vector<unsigned char> active_;
    std::vector<unsigned char> outside_;
    std::vector<Diagnostic> diagnostics_;
    std::optional<double> last_valid_;
    RunningMinMax running_;
    DecisionRule rule_;
    SegmentCallback callback_;
};

/// Runs the online detector over a whole chunk source. Needs a causal
/// (moving-average) smoother.
[[nodiscard]] DriftReport detect_online(ChunkSource& chunks, const DetectorConfig& config,
                                        std::optional<Bounds> global_bounds = std::nullopt);

/// Batch computation over a finite stream. Supports every smoother. In global
/// scope without explicit bounds the grid spans all chunks.
[[nodiscard]] DriftReport detect_batch(std::span<const Chunk> chunks, const StreamMeta& meta,
                                       const DetectorConfig& config,
                                       std::optional<Bounds> global_bounds = std::nullopt);

/// Smoothing, differentiation and decision over precomputed distance rows.
/// `base` supplies config, meta and the rows; every derived field is rebuilt.
[[nodiscard]] DriftReport decide(DriftReport base);

/// Re-runs only the decision rule of `base` at another alpha; the smoothed
/// series and gradient are reused as they are.
[[nodiscard]] DriftReport with_alpha(DriftReport base, double alpha);

}  // namespace kld
