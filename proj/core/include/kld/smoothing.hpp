/// @file smoothing.hpp
/// @brief Smoothers and finite differences for the divergence sequence.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kld {

/// Trailing mean: out[k] = mean(series[max(0, k-window+1) ..= k]). Causal.
[[nodiscard]] std::vector<double> moving_average(std::span<const double> series, std::size_t window);

/// Single output of the trailing mean at index k; moving_average() is built on it.
[[nodiscard]] double trailing_mean(std::span<const double> series, std::size_t k, std::size_t window);

/// Locally weighted linear regression (Cleveland's LOWESS) over x = 0..n-1.
///
/// Each fitted value uses the ceil(frac * n) nearest points with tricube
/// weights; `iterations` robustness passes reweight by the bisquare of the
/// residuals scaled by six median absolute residuals.
[[nodiscard]] std::vector<double> lowess(std::span<const double> series, double frac, std::size_t iterations);

/// l[k] = series[k+1] - series[k].
[[nodiscard]] std::vector<double> first_derivative(std::span<const double> series);

/// Global min-max scaling to [0, 1]. A constant series maps to all zeros.
[[nodiscard]] std::vector<double> normalize_min_max(std::span<const double> series);

/// Causal min-max scaling: each value is scaled by the min/max of the history
/// seen so far (itself included), so it always lies in [0, 1].
class RunningMinMax {
public:
    double push(double value);

private:
    double min_ = 0.0;
    double max_ = 0.0;
    bool seen_ = false;
};

enum class SmootherKind { moving_average, lowess };

/// Smoother selection, parsed from "ma:<window>" or "lowess:<frac>[,<iters>]".
struct SmootherSpec {
    SmootherKind kind = SmootherKind::moving_average;
    std::size_t window = 5;
    double frac = 0.05;
    std::size_t iterations = 1;

    [[nodiscard]] bool causal() const noexcept { return kind == SmootherKind::moving_average; }
    [[nodiscard]] std::vector<double> apply(std::span<const double> series) const;
    void validate() const;

    friend bool operator==(const SmootherSpec&, const SmootherSpec&) = default;
};

[[nodiscard]] SmootherSpec parse_smoother(const std::string& text);
[[nodiscard]] std::string to_string(const SmootherSpec& spec);

/// The divergence sequence with its plot-oriented derived columns.
/// normalized is the global min-max scaling of raw; smoothed is the smoother
/// applied to normalized; gradient is its first difference.
struct DivergenceSeries {
    std::vector<double> raw;
    std::vector<double> normalized;
    std::vector<double> smoothed;
    std::vector<double> gradient;  ///< one shorter than raw
};

[[nodiscard]] DivergenceSeries make_series(std::vector<double> raw, const SmootherSpec& smoother);

}  // namespace kld
