/// @file baselines.cpp

#include "kld/baselines.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "kld/detector.hpp"
#include "kld/error.hpp"
#include "kld/report.hpp"

namespace kld {

namespace {

void require_warmup(std::span<const double> signal, std::size_t warmup) {
    if (warmup == 0) {
        throw UsageError("baseline warmup must be at least 1");
    }
    if (signal.size() < warmup) {
        throw DataError("signal of length " + std::to_string(signal.size()) + " is shorter than the warmup of " +
                        std::to_string(warmup));
    }
}

double prefix_mean(std::span<const double> signal, std::size_t warmup) {
    double sum = 0.0;
    for (std::size_t k = 0; k < warmup; ++k) {
        sum += signal[k];
    }
    return sum / static_cast<double>(warmup);
}

double prefix_sd(std::span<const double> signal, std::size_t warmup, double mean) {
    if (warmup < 2) {
        return 0.0;
    }
    double ss = 0.0;
    for (std::size_t k = 0; k < warmup; ++k) {
        ss += (signal[k] - mean) * (signal[k] - mean);
    }
    return std::sqrt(ss / static_cast<double>(warmup - 1));
}

}  // namespace

void BaselineConfig::validate() const {
    if (kind == BaselineKind::cusum) {
        if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
            throw UsageError("cusum drift allowance must be non-negative");
        }
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw UsageError("cusum threshold must be positive");
        }
    } else {
        if (!(lambda > 0.0 && lambda <= 1.0)) {
            throw UsageError("ewma decay must lie in (0, 1]");
        }
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw UsageError("ewma limit multiplier must be positive");
        }
    }
    if (warmup == 0) {
        throw UsageError("baseline warmup must be at least 1");
    }
}

std::string_view to_string(BaselineKind kind) { return kind == BaselineKind::cusum ? "cusum" : "ewma"; }

BaselineConfig parse_baseline(const std::string& text) {
    auto bad = [&]() {
        return UsageError("cannot parse baseline '" + text + "' (expected cusum:<kappa>,<h> or ewma:<lambda>,<c>)");
    };
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    BaselineConfig cfg;
    if (name == "cusum") {
        cfg.kind = BaselineKind::cusum;
    } else if (name == "ewma") {
        cfg.kind = BaselineKind::ewma;
    } else {
        throw bad();
    }
    if (colon != std::string::npos) {
        const std::string_view args = std::string_view(text).substr(colon + 1);
        const auto comma = args.find(',');
        if (comma == std::string_view::npos) {
            throw bad();
        }
        double a = 0.0;
        double b = 0.0;
        auto parse = [&](std::string_view s, double& out) {
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            if (ec != std::errc{} || p != s.data() + s.size()) {
                throw bad();
            }
        };
        parse(args.substr(0, comma), a);
        parse(args.substr(comma + 1), b);
        if (cfg.kind == BaselineKind::cusum) {
            cfg.kappa = a;
            cfg.h = b;
        } else {
            cfg.lambda = a;
            cfg.c = b;
        }
    }
    cfg.validate();
    return cfg;
}

std::string to_string(const BaselineConfig& config) {
    std::string out(to_string(config.kind));
    if (config.kind == BaselineKind::cusum) {
        return out + ':' + format_double(config.kappa) + ',' + format_double(config.h);
    }
    return out + ':' + format_double(config.lambda) + ',' + format_double(config.c);
}

std::vector<std::size_t> cusum(std::span<const double> signal, double kappa, double h, std::size_t warmup) {
    if (!(h > 0.0)) {
        throw UsageError("cusum threshold must be positive");
    }
    require_warmup(signal, warmup);
    const double mean0 = prefix_mean(signal, warmup);
    std::vector<std::size_t> alarms;
    double g = 0.0;
    for (std::size_t k = warmup; k < signal.size(); ++k) {
        g = std::max(0.0, g + (signal[k] - mean0 - kappa));
        if (g > h) {
            alarms.push_back(k);
            g = 0.0;
        }
    }
    return alarms;
}

std::vector<std::size_t> ewma(std::span<const double> signal, double lambda, double c, std::size_t warmup) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw UsageError("ewma decay must lie in (0, 1]");
    }
    require_warmup(signal, warmup);
    const double mean0 = prefix_mean(signal, warmup);
    // Floored so rounding in z cannot trip a zero limit on a constant prefix.
    const double limit = std::max(c * prefix_sd(signal, warmup, mean0) * std::sqrt(lambda / (2.0 - lambda)), 1e-12);
    std::vector<std::size_t> alarms;
    double z = mean0;
    bool out = false;
    for (std::size_t k = warmup; k < signal.size(); ++k) {
        z = lambda * signal[k] + (1.0 - lambda) * z;
        const bool now = std::abs(z - mean0) > limit;
        if (now && !out) {
            alarms.push_back(k);
        }
        out = now;
    }
    return alarms;
}

std::vector<double> standardize(std::span<const double> signal, std::size_t warmup) {
    require_warmup(signal, warmup);
    const double mean0 = prefix_mean(signal, warmup);
    double sd = prefix_sd(signal, warmup, mean0);
    if (!(sd > 0.0)) {
        sd = 1.0;
    }
    std::vector<double> out(signal.size());
    for (std::size_t k = 0; k < signal.size(); ++k) {
        out[k] = (signal[k] - mean0) / sd;
    }
    return out;
}

std::vector<std::size_t> baseline_alarms(const DriftReport& report, const BaselineConfig& config) {
    config.validate();
    const auto z = standardize(report.raw_values(), config.warmup);
    auto alarms = config.kind == BaselineKind::cusum ? cusum(z, config.kappa, config.h, config.warmup)
                                                     : ewma(z, config.lambda, config.c, config.warmup);
    for (auto& a : alarms) {
        a += 1;
    }
    return alarms;
}

}  // namespace kld
