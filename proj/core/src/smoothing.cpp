/// @file smoothing.cpp

#include "kld/smoothing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "kld/error.hpp"

namespace kld {

double trailing_mean(std::span<const double> series, std::size_t k, std::size_t window) {
    const std::size_t start = k + 1 >= window ? k + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = start; j <= k; ++j) {
        sum += series[j];
    }
    return sum / static_cast<double>(k - start + 1);
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    if (window == 0) {
        throw UsageError("moving-average window must be at least 1");
    }
    if (series.empty()) {
        throw DataError("cannot smooth an empty series");
    }
    std::vector<double> out(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
        out[k] = trailing_mean(series, k, window);
    }
    return out;
}

namespace {

double tricube(double u) {
    u = std::abs(u);
    if (u >= 1.0) {
        return 0.0;
    }
    const double t = 1.0 - u * u * u;
    return t * t * t;
}

double bisquare(double u) {
    u = std::abs(u);
    if (u >= 1.0) {
        return 0.0;
    }
    const double t = 1.0 - u * u;
    return t * t;
}

// One weighted local-linear pass over all points.
void lowess_pass(std::span<const double> y, std::size_t span, std::span<const double> robustness,
                 std::vector<double>& fitted) {
    const std::size_t n = y.size();
    std::size_t left = 0;
    std::size_t right = span - 1;
    for (std::size_t i = 0; i < n; ++i) {
        // Slide the window of `span` nearest neighbours towards i.
        while (right + 1 < n && (i - left) > (right + 1 - i)) {
            ++left;
            ++right;
        }
        const auto xi = static_cast<double>(i);
        const double h = static_cast<double>(std::max(i - left, right - i));
        double sw = 0.0;
        double sx = 0.0;
        double sy = 0.0;
        for (std::size_t j = left; j <= right; ++j) {
            const double w = tricube((static_cast<double>(j) - xi) / h) * robustness[j];
            sw += w;
            sx += w * static_cast<double>(j);
            sy += w * y[j];
        }
        if (!(sw > 0.0)) {
            fitted[i] = y[i];
            continue;
        }
        const double xm = sx / sw;
        const double ym = sy / sw;
        double sxx = 0.0;
        double sxy = 0.0;
        for (std::size_t j = left; j <= right; ++j) {
            const double w = tricube((static_cast<double>(j) - xi) / h) * robustness[j];
            const double dx = static_cast<double>(j) - xm;
            sxx += w * dx * dx;
            sxy += w * dx * (y[j] - ym);
        }
        // Degenerate design (single effective point): fall back to the weighted mean.
        fitted[i] = sxx > 1e-12 * h * h ? ym + sxy / sxx * (xi - xm) : ym;
    }
}

}  // namespace

std::vector<double> lowess(std::span<const double> series, double frac, std::size_t iterations) {
    if (!(frac > 0.0 && frac <= 1.0)) {
        throw UsageError("lowess fraction must lie in (0, 1]");
    }
    const std::size_t n = series.size();
    if (n < 2) {
        throw DataError("lowess needs at least two points");
    }
    auto span = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n)));
    span = std::clamp<std::size_t>(span, 2, n);

    std::vector<double> robustness(n, 1.0);
    std::vector<double> fitted(n, 0.0);
    std::vector<double> residual(n, 0.0);
    lowess_pass(series, span, robustness, fitted);
    for (std::size_t it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] = std::abs(series[i] - fitted[i]);
        }
        std::vector<double> sorted = residual;
        const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(n / 2);
        std::nth_element(sorted.begin(), mid, sorted.end());
        double median = *mid;
        if (n % 2 == 0) {
            median = 0.5 * (median + *std::max_element(sorted.begin(), mid));
        }
        if (!(median > 0.0)) {
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            robustness[i] = bisquare(residual[i] / (6.0 * median));
        }
        lowess_pass(series, span, robustness, fitted);
    }
    return fitted;
}

std::vector<double> first_derivative(std::span<const double> series) {
    if (series.size() < 2) {
        throw DataError("first derivative needs at least two points");
    }
    std::vector<double> out(series.size() - 1);
    for (std::size_t k = 0; k + 1 < series.size(); ++k) {
        out[k] = series[k + 1] - series[k];
    }
    return out;
}

std::vector<double> normalize_min_max(std::span<const double> series) {
    std::vector<double> out(series.size(), 0.0);
    if (series.empty()) {
        return out;
    }
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) {
        return out;
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        out[k] = (series[k] - *lo) / range;
    }
    return out;
}

double RunningMinMax::push(double value) {
    if (!seen_) {
        min_ = max_ = value;
        seen_ = true;
    } else {
        min_ = std::min(min_, value);
        max_ = std::max(max_, value);
    }
    const double range = max_ - min_;
    if (!(range > 0.0)) {
        return 0.0;
    }
    return std::clamp((value - min_) / range, 0.0, 1.0);
}

std::vector<double> SmootherSpec::apply(std::span<const double> series) const {
    validate();
    if (kind == SmootherKind::moving_average) {
        return moving_average(series, window);
    }
    return lowess(series, frac, iterations);
}

void SmootherSpec::validate() const {
    if (kind == SmootherKind::moving_average && window == 0) {
        throw UsageError("moving-average window must be at least 1");
    }
    if (kind == SmootherKind::lowess && !(frac > 0.0 && frac <= 1.0)) {
        throw UsageError("lowess fraction must lie in (0, 1]");
    }
}

SmootherSpec parse_smoother(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? std::string{} : text.substr(colon + 1);
    SmootherSpec spec;
    auto bad = [&]() { return UsageError("cannot parse smoother '" + text + "' (expected ma:<window> or lowess:<frac>[,<iters>])"); };
    auto parse_int = [&](std::string_view s, std::size_t& out) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || p != s.data() + s.size()) {
            throw bad();
        }
    };
    auto parse_real = [&](std::string_view s, double& out) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || p != s.data() + s.size()) {
            throw bad();
        }
    };
    if (name == "ma") {
        spec.kind = SmootherKind::moving_average;
        if (!args.empty()) {
            parse_int(args, spec.window);
        }
    } else if (name == "lowess") {
        spec.kind = SmootherKind::lowess;
        if (!args.empty()) {
            const auto comma = args.find(',');
            parse_real(std::string_view(args).substr(0, comma), spec.frac);
            if (comma != std::string::npos) {
                parse_int(std::string_view(args).substr(comma + 1), spec.iterations);
            }
        }
    } else {
        throw bad();
    }
    spec.validate();
    return spec;
}

std::string to_string(const SmootherSpec& spec) {
    std::ostringstream os;
    if (spec.kind == SmootherKind::moving_average) {
        os << "ma:" << spec.window;
    } else {
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, spec.frac);
        (void)ec;
        os << "lowess:" << std::string_view(buf, static_cast<std::size_t>(p - buf)) << ',' << spec.iterations;
    }
    return os.str();
}

DivergenceSeries make_series(std::vector<double> raw, const SmootherSpec& smoother) {
    DivergenceSeries s;
    s.raw = std::move(raw);
    s.normalized = normalize_min_max(s.raw);
    if (s.raw.empty()) {
        return s;
    }
    s.smoothed = smoother.apply(s.normalized);
    if (s.smoothed.size() >= 2) {
        s.gradient = first_derivative(s.smoothed);
    }
    return s;
}

}  // namespace kld
