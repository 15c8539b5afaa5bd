/// @file detector.cpp

#include "kld/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kld/error.hpp"
#include "kld/pmf.hpp"

namespace kld {

std::string_view to_string(GridScope scope) { return scope == GridScope::global ? "global" : "per_pair"; }

GridScope grid_scope_from_string(std::string_view text) {
    if (text == "per_pair" || text == "per-pair") {
        return GridScope::per_pair;
    }
    if (text == "global") {
        return GridScope::global;
    }
    throw UsageError("unknown grid scope '" + std::string(text) + "' (expected per_pair or global)");
}

std::string_view to_string(BandSide side) { return side == BandSide::both ? "both" : "upper"; }

BandSide band_side_from_string(std::string_view text) {
    if (text == "upper") {
        return BandSide::upper;
    }
    if (text == "both") {
        return BandSide::both;
    }
    throw UsageError("unknown band side '" + std::string(text) + "' (expected upper or both)");
}

void DetectorConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw UsageError("alpha must be a finite positive number");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw UsageError("epsilon must be a finite positive number");
    }
    if (bins_per_dim == 0) {
        throw UsageError("bins per dimension must be at least 1");
    }
    if (stats_window && *stats_window < 2) {
        throw UsageError("stats window must be at least 2");
    }
    if (warmup < 2) {
        throw UsageError("warmup must be at least 2 gradient points");
    }
    smoother.validate();
}

// ---------------------------------------------------------------------------
// Band

BandStatistics::BandStatistics(std::optional<std::size_t> window) : window_(window) {
    if (window_ && *window_ == 0) {
        throw UsageError("stats window must be at least 1");
    }
}

void BandStatistics::push(double value) {
    if (window_) {
        recent_.push_back(value);
        if (recent_.size() > *window_) {
            recent_.pop_front();
        }
        return;
    }
    // Welford update.
    ++n_;
    const double delta = value - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (value - mean_);
}

std::size_t BandStatistics::count() const noexcept { return window_ ? recent_.size() : n_; }

double BandStatistics::mean() const {
    if (count() == 0) {
        throw InvariantError("band statistics queried before any value");
    }
    if (!window_) {
        return mean_;
    }
    return std::accumulate(recent_.begin(), recent_.end(), 0.0) / static_cast<double>(recent_.size());
}

double BandStatistics::stddev() const {
    const double m = mean();
    if (!window_) {
        return std::sqrt(std::max(0.0, m2_ / static_cast<double>(n_)));
    }
    double ss = 0.0;
    for (double v : recent_) {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / static_cast<double>(recent_.size()));
}

Band BandStatistics::band(double alpha) const {
    const double m = mean();
    const double half = std::max(alpha * stddev(), 1e-12);
    return {m - half, m + half};
}

std::vector<Band> decision_band(std::span<const double> gradient, double alpha,
                                std::optional<std::size_t> stats_window) {
    BandStatistics stats(stats_window);
    std::vector<Band> out;
    out.reserve(gradient.size());
    for (double g : gradient) {
        stats.push(g);
        out.push_back(stats.band(alpha));
    }
    return out;
}

DecisionRule::DecisionRule(double alpha, std::optional<std::size_t> stats_window, std::size_t warmup,
                           BandSide side)
    : alpha_(alpha), warmup_(warmup), side_(side), stats_(stats_window) {}

DecisionRule::Outcome DecisionRule::push(double gradient, std::size_t timestamp) {
    stats_.push(gradient);
    Outcome out;
    out.band = stats_.band(alpha_);
    // count() saturates under a trailing window, so track points seen.
    ++seen_;
    out.active = seen_ >= warmup_;
    out.outside = out.active && out.band.outside(gradient, side_);
    if (out.outside && !open_) {
        segments_.push_back({timestamp, std::nullopt});
        open_ = true;
        out.opened = true;
    } else if (!out.outside && open_) {
        segments_.back().exit = timestamp;
        open_ = false;
        out.closed = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Distances

std::optional<ChunkDistance> chunk_distance(const Chunk& reference, const Chunk& next, const DetectorConfig& config,
                                            std::size_t classes, const std::shared_ptr<const Grid>& global_grid) {
    if (reference.dim() != next.dim()) {
        throw DataError("chunk pair has mismatched dimensions");
    }
    std::shared_ptr<const Grid> grid = global_grid;
    if (!grid) {
        grid = std::make_shared<const Grid>(
            Grid::build(chunk_bounds(reference, next), config.bins_per_dim, config.bins_mode));
    }
    const auto a = estimate(reference, grid, classes);
    const auto b = estimate(next, grid, classes);
    auto bins = bin_divergences(a, b, config.epsilon);
    if (bins.per_bin.empty()) {
        return std::nullopt;
    }
    ChunkDistance out;
    out.first = reference.index();
    out.skipped_bins = bins.skipped;
    out.value_unweighted = aggregate(bins.per_bin, a.gammas(), Weighting::unweighted, config.jay_factor);
    out.value_weighted = aggregate(bins.per_bin, a.gammas(), Weighting::weighted, config.jay_factor);
    out.per_bin = std::move(bins.per_bin);
    return out;
}

namespace {

// Turns a pair distance into a series row; a missing distance repeats the
// last valid value (0 before any) and logs a diagnostic.
DistanceRow make_row(std::size_t k, const std::optional<ChunkDistance>& d, const DetectorConfig& config,
                     std::optional<double>& last_valid, std::vector<Diagnostic>& diagnostics) {
    DistanceRow row;
    row.k = k;
    if (!d) {
        row.gap = true;
        row.value = last_valid.value_or(0.0);
        row.unweighted = row.weighted = row.value;
        diagnostics.push_back({k + 1, "chunks " + std::to_string(k) + " and " + std::to_string(k + 1) +
                                          " share no occupied bin; previous divergence carried forward"});
        return row;
    }
    row.unweighted = d->value_unweighted;
    row.weighted = d->value_weighted;
    row.value = d->value(config.weighting);
    row.skipped_bins = d->skipped_bins;
    row.compared_bins = d->per_bin.size();
    last_valid = row.value;
    return row;
}

void require_chunk(const Chunk& chunk, const StreamMeta& meta) {
    if (chunk.dim() != meta.dim) {
        throw DataError("chunk " + std::to_string(chunk.index()) + " has dimension " + std::to_string(chunk.dim()) +
                        ", expected " + std::to_string(meta.dim));
    }
    if (chunk.empty()) {
        throw DataError("chunk " + std::to_string(chunk.index()) + " is empty");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Report

std::vector<double> DriftReport::raw_values() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.push_back(r.value);
    }
    return out;
}

DivergenceSeries DriftReport::plot_series() const {
    DivergenceSeries s;
    s.raw = raw_values();
    s.normalized = normalize_min_max(s.raw);
    if (s.raw.empty()) {
        return s;
    }
    const auto [lo, hi] = std::minmax_element(s.raw.begin(), s.raw.end());
    const double range = *hi - *lo;
    const double scale = range > 0.0 ? 1.0 / range : 0.0;
    const double offset = *lo;
    s.smoothed.reserve(smoothed.size());
    for (double v : smoothed) {
        s.smoothed.push_back((v - offset) * scale);
    }
    s.gradient.reserve(gradient.size());
    for (double g : gradient) {
        s.gradient.push_back(g * scale);
    }
    return s;
}

namespace {

void apply_rule(DriftReport& r) {
    r.bands.clear();
    r.active.clear();
    r.outside.clear();
    r.critical_points.clear();
    DecisionRule rule(r.config.alpha, r.config.stats_window, r.config.warmup, r.config.band_side);
    for (std::size_t k = 0; k < r.gradient.size(); ++k) {
        const auto o = rule.push(r.gradient[k], k + 2);
        r.bands.push_back(o.band);
        r.active.push_back(o.active ? 1 : 0);
        r.outside.push_back(o.outside ? 1 : 0);
    }
    r.segments = rule.segments();
    for (const auto& s : r.segments) {
        r.critical_points.push_back(s.enter);
    }
}

}  // namespace

DriftReport decide(DriftReport base) {
    base.config.validate();
    base.smoothed.clear();
    base.gradient.clear();
    const auto values = base.raw_values();
    if (!values.empty()) {
        base.smoothed = base.config.smoother.apply(values);
    }
    if (base.smoothed.size() >= 2) {
        base.gradient = first_derivative(base.smoothed);
    }
    apply_rule(base);
    return base;
}

DriftReport with_alpha(DriftReport base, double alpha) {
    base.config.alpha = alpha;
    base.config.validate();
    apply_rule(base);
    return base;
}

// ---------------------------------------------------------------------------
// Online

Detector::Detector(DetectorConfig config, StreamMeta meta, std::optional<Bounds> global_bounds)
    : config_(std::move(config)),
      meta_(std::move(meta)),
      global_bounds_(std::move(global_bounds)),
      rule_(config_.alpha, config_.stats_window, config_.warmup, config_.band_side) {
    config_.validate();
    meta_.validate();
    if (!config_.smoother.causal()) {
        throw UsageError("the online detector needs a causal smoother (ma:<window>)");
    }
    if (global_bounds_ && global_bounds_->size() != meta_.dim) {
        throw UsageError("global bounds dimension does not match the stream");
    }
}

Detector::Step Detector::push(const Chunk& chunk) {
    require_chunk(chunk, meta_);
    Step step;
    step.chunk = seen_++;
    if (config_.grid_scope == GridScope::global && !global_grid_) {
        const Bounds bounds = global_bounds_ ? *global_bounds_ : chunk_bounds(chunk);
        global_grid_ = std::make_shared<const Grid>(Grid::build(bounds, config_.bins_per_dim, config_.bins_mode));
    }
    if (!previous_) {
        previous_ = chunk;
        return step;
    }

    const std::size_t k = rows_.size();
    const auto d = chunk_distance(*previous_, chunk, config_, meta_.classes, global_grid_);
    rows_.push_back(make_row(k, d, config_, last_valid_, diagnostics_));
    previous_ = chunk;
    step.distance = rows_.back();
    values_.push_back(rows_.back().value);
    step.normalized = running_.push(values_.back());
    smoothed_.push_back(trailing_mean(values_, k, config_.smoother.window));

    if (k >= 1) {
        const double g = smoothed_[k] - smoothed_[k - 1];
        gradient_.push_back(g);
        step.gradient = g;
        const auto o = rule_.push(g, step.chunk);
        bands_.push_back(o.band);
        active_.push_back(o.active ? 1 : 0);
        outside_.push_back(o.outside ? 1 : 0);
        step.decision = o;
        if (o.opened && callback_) {
            callback_(rule_.segments().back());
        }
    }
    return step;
}

DriftReport Detector::report() const {
    DriftReport r;
    r.config = config_;
    r.meta = meta_;
    r.chunks_seen = seen_;
    if (global_grid_) {
        r.global_grid = *global_grid_;
    }
    r.rows = rows_;
    r.smoothed = smoothed_;
    r.gradient = gradient_;
    r.bands = bands_;
    r.active = active_;
    r.outside = outside_;
    r.segments = rule_.segments();
    for (const auto& s : r.segments) {
        r.critical_points.push_back(s.enter);
    }
    r.diagnostics = diagnostics_;
    return r;
}

DriftReport detect_online(ChunkSource& chunks, const DetectorConfig& config, std::optional<Bounds> global_bounds) {
    Detector detector(config, chunks.meta(), std::move(global_bounds));
    while (auto chunk = chunks.next()) {
        detector.push(*chunk);
    }
    auto report = detector.report();
    report.dropped_records = chunks.dropped();
    return report;
}

DriftReport detect_batch(std::span<const Chunk> chunks, const StreamMeta& meta, const DetectorConfig& config,
                         std::optional<Bounds> global_bounds) {
    config.validate();
    meta.validate();
    DriftReport r;
    r.config = config;
    r.meta = meta;
    r.chunks_seen = chunks.size();
    for (const auto& c : chunks) {
        require_chunk(c, meta);
    }

    std::shared_ptr<const Grid> grid;
    if (config.grid_scope == GridScope::global && !chunks.empty()) {
        Bounds bounds;
        if (global_bounds) {
            bounds = *global_bounds;
        } else {
            for (const auto& c : chunks) {
                extend_bounds(bounds, c);
            }
        }
        grid = std::make_shared<const Grid>(Grid::build(bounds, config.bins_per_dim, config.bins_mode));
        r.global_grid = *grid;
    }

    std::optional<double> last_valid;
    for (std::size_t k = 0; k + 1 < chunks.size(); ++k) {
        const auto d = chunk_distance(chunks[k], chunks[k + 1], config, meta.classes, grid);
        r.rows.push_back(make_row(k, d, config, last_valid, r.diagnostics));
    }
    return decide(std::move(r));
}

}  // namespace kld
