/// @file evaluation.cpp

#include "kld/evaluation.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "kld/error.hpp"

namespace kld {

namespace {

void require_increasing(std::span<const std::size_t> v, const char* name) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) {
            throw DataError(std::string(name) + " indices must be strictly increasing");
        }
    }
}

}  // namespace

MatchingResult match(std::span<const std::size_t> truth, std::span<const std::size_t> detections,
                     std::size_t tolerance) {
    require_increasing(truth, "truth");
    require_increasing(detections, "detection");
    MatchingResult r;
    r.tolerance = tolerance;
    std::size_t t = 0;
    double delay = 0.0;
    for (std::size_t d : detections) {
        // Truths more than `tolerance` before d can never be matched again.
        while (t < truth.size() && truth[t] + tolerance < d) {
            ++t;
        }
        if (t < truth.size() && truth[t] <= d + tolerance) {
            r.pairs.emplace_back(truth[t], d);
            delay += static_cast<double>(d) - static_cast<double>(truth[t]);
            ++t;
        } else {
            ++r.fp;
        }
    }
    r.tp = r.pairs.size();
    r.fn = truth.size() - r.tp;
    if (r.tp > 0) {
        r.mean_delay = delay / static_cast<double>(r.tp);
    }
    return r;
}

std::vector<SweepEntry> alpha_sweep(const DriftReport& base, std::span<const double> alphas, std::size_t tolerance) {
    if (alphas.empty()) {
        throw UsageError("alpha sweep needs at least one alpha");
    }
    std::vector<SweepEntry> out;
    out.reserve(alphas.size());
    for (double alpha : alphas) {
        const auto r = with_alpha(base, alpha);
        SweepEntry e;
        e.alpha = alpha;
        e.detections = r.critical_points.size();
        e.matching = match(r.meta.ground_truth, r.critical_points, tolerance);
        e.segments = r.segments;
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<SweepEntry> alpha_sweep(std::span<const Chunk> chunks, const StreamMeta& meta,
                                    const DetectorConfig& config, std::span<const double> alphas,
                                    std::size_t tolerance) {
    return alpha_sweep(detect_batch(chunks, meta, config), alphas, tolerance);
}

std::vector<double> parse_alphas(const std::string& text) {
    auto bad = [&]() { return UsageError("cannot parse alphas '" + text + "' (expected a:b:step or a,b,c)"); };
    auto number = [&](std::string_view s) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
            throw bad();
        }
        return v;
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) {
            throw bad();
        }
        const std::string_view all(text);
        const double start = number(all.substr(0, c1));
        const double stop = number(all.substr(c1 + 1, c2 - c1 - 1));
        const double step = number(all.substr(c2 + 1));
        if (!(step > 0.0) || stop < start) {
            throw bad();
        }
        // Index-based so accumulated rounding cannot drop the endpoint.
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5));
        for (std::size_t i = 0; i <= n; ++i) {
            out.push_back(start + static_cast<double>(i) * step);
        }
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto end = comma == std::string::npos ? text.size() : comma;
        out.push_back(number(std::string_view(text).substr(pos, end - pos)));
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

}  // namespace kld
