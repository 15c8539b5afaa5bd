/// @file baselines.hpp
/// @brief CUSUM and EWMA control charts over the raw divergence series.
///
/// Both charts estimate the in-control mean (and EWMA its sigma) from a
/// warmup prefix and monitor the samples after it. They model mean shifts,
/// so they read the raw divergence values rather than the gradient.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kld {

struct DriftReport;

enum class BaselineKind { cusum, ewma };

struct BaselineConfig {
    BaselineKind kind = BaselineKind::cusum;
    double kappa = 0.5;   ///< CUSUM drift allowance
    double h = 5.0;       ///< CUSUM alarm threshold
    double lambda = 0.2;  ///< EWMA decay
    double c = 3.0;       ///< EWMA control-limit multiplier
    std::size_t warmup = 50;

    void validate() const;
    friend bool operator==(const BaselineConfig&, const BaselineConfig&) = default;
};

/// "cusum[:kappa,h]" or "ewma[:lambda,c]"; omitted values keep the defaults.
[[nodiscard]] BaselineConfig parse_baseline(const std::string& text);
[[nodiscard]] std::string to_string(const BaselineConfig& config);
[[nodiscard]] std::string_view to_string(BaselineKind kind);

/// One-sided CUSUM. g = max(0, g + x_k - mean0 - kappa) for k >= warmup;
/// alarm when g > h, after which g restarts at 0.
[[nodiscard]] std::vector<std::size_t> cusum(std::span<const double> signal, double kappa, double h,
                                             std::size_t warmup = 50);

/// EWMA chart. z starts at mean0; alarm onsets where
/// |z_k - mean0| > c * sigma0 * sqrt(lambda / (2 - lambda)).
/// Consecutive out-of-control samples count as one alarm.
[[nodiscard]] std::vector<std::size_t> ewma(std::span<const double> signal, double lambda, double c,
                                            std::size_t warmup = 50);

/// (x - mean0) / sigma0 with the warmup-prefix sample mean and deviation
/// (sigma0 = 1 when the prefix is constant).
[[nodiscard]] std::vector<double> standardize(std::span<const double> signal, std::size_t warmup);

/// Standardized baseline run on the report's tracked divergence values.
/// Alarms are chunk timestamps: D_k is known once chunk k+1 has arrived.
[[nodiscard]] std::vector<std::size_t> baseline_alarms(const DriftReport& report, const BaselineConfig& config);

}  // namespace kld
