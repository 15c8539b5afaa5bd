/// @file divergence.cpp

#include "kld/divergence.hpp"

#include <cmath>
#include <string>

#include "kld/error.hpp"

namespace kld {

namespace {

constexpr double kSumTolerance = 1e-9;

void require_distribution(std::span<const double> v, const char* name) {
    double total = 0.0;
    for (double x : v) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw DataError(std::string("kl: ") + name + " has a negative or non-finite entry");
        }
        total += x;
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
        throw DataError(std::string("kl: ") + name + " does not sum to 1");
    }
}

}  // namespace

double kl(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw DataError("kl: distributions have different lengths");
    }
    require_distribution(p, "p");
    require_distribution(q, "q");
    double sum = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) {
        if (p[l] == 0.0) {
            continue;
        }
        if (q[l] == 0.0) {
            throw DataError("kl: q is zero where p is positive (missing smoothing step)");
        }
        sum += p[l] * std::log(p[l] / q[l]);
    }
    return sum < 0.0 ? 0.0 : sum;
}

std::string_view to_string(Weighting w) { return w == Weighting::weighted ? "weighted" : "unweighted"; }

Weighting weighting_from_string(std::string_view text) {
    if (text == "weighted") {
        return Weighting::weighted;
    }
    if (text == "unweighted") {
        return Weighting::unweighted;
    }
    throw UsageError("unknown weighting '" + std::string(text) + "' (expected weighted or unweighted)");
}

BinDivergences bin_divergences(const BinnedPmf& a, const BinnedPmf& b, double epsilon) {
    if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid())) {
        throw DataError("bin divergences need pmfs built on the same grid");
    }
    if (a.classes() != b.classes()) {
        throw DataError("bin divergences need pmfs with the same class count");
    }
    BinDivergences out;
    for (std::size_t j = 0; j < a.bin_count(); ++j) {
        if (!a.occupied(j) || !b.occupied(j)) {
            ++out.skipped;
            continue;
        }
        const auto q = smooth_pmf(b.class_probs(j), epsilon);
        out.per_bin.push_back({{j}, kl(a.class_probs(j), q)});
    }
    return out;
}

double aggregate(std::span<const BinDivergence> per_bin, std::span<const double> reference_gammas, Weighting mode,
                 bool jay_factor) {
    if (per_bin.empty()) {
        throw DataError("no overlapping occupied bins");
    }
    const auto compared = static_cast<double>(per_bin.size());
    if (mode == Weighting::unweighted) {
        double sum = 0.0;
        for (const auto& d : per_bin) {
            sum += d.value;
        }
        return sum / compared;
    }
    double mass = 0.0;
    for (const auto& d : per_bin) {
        if (d.bin.value >= reference_gammas.size()) {
            throw InvariantError("bin index outside the reference weight vector");
        }
        mass += reference_gammas[d.bin.value];
    }
    if (!(mass > 0.0)) {
        throw DataError("compared bins carry no reference occupancy");
    }
    double sum = 0.0;
    for (const auto& d : per_bin) {
        sum += reference_gammas[d.bin.value] / mass * d.value;
    }
    return jay_factor ? sum / compared : sum;
}

ChunkDistance compare(const BinnedPmf& reference, const BinnedPmf& next, double epsilon, bool jay_factor,
                      std::size_t first_index) {
    auto bins = bin_divergences(reference, next, epsilon);
    ChunkDistance out;
    out.first = first_index;
    out.skipped_bins = bins.skipped;
    out.value_unweighted = aggregate(bins.per_bin, reference.gammas(), Weighting::unweighted, jay_factor);
    out.value_weighted = aggregate(bins.per_bin, reference.gammas(), Weighting::weighted, jay_factor);
    out.per_bin = std::move(bins.per_bin);
    return out;
}

}  // namespace kld
