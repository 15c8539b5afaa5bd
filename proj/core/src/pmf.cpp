/// @file pmf.cpp

#include "kld/pmf.hpp"

#include <cmath>

#include "kld/error.hpp"

namespace kld {

BinnedPmf estimate(const Chunk& chunk, std::shared_ptr<const Grid> grid, std::size_t classes) {
    if (!grid) {
        throw InvariantError("pmf estimation needs a grid");
    }
    if (classes == 0) {
        throw UsageError("class count must be at least 1");
    }
    if (chunk.dim() != grid->dim()) {
        throw DataError("chunk dimensionality does not match the grid");
    }
    const std::size_t bins = grid->bin_count();

    BinnedPmf pmf;
    pmf.grid_ = std::move(grid);
    pmf.classes_ = classes;
    std::vector<std::size_t> counts(bins * classes, 0);
    pmf.members_.assign(bins, 0);

    std::vector<BinIndex> hits;
    hits.reserve(pmf.grid_->memberships_per_point());
    for (std::size_t k = 0; k < chunk.size(); ++k) {
        const auto pt = chunk.point(k);
        if (pt.label >= classes) {
            throw DataError("label " + std::to_string(pt.label) + " is outside the declared class count");
        }
        hits.clear();
        pmf.grid_->memberships(pt.input, hits);
        for (const auto j : hits) {
            ++counts[j.value * classes + pt.label];
            ++pmf.members_[j.value];
        }
    }

    pmf.total_ = chunk.size() * pmf.grid_->memberships_per_point();
    pmf.probs_.assign(bins * classes, 1.0 / static_cast<double>(classes));
    pmf.gamma_.assign(bins, 0.0);
    pmf.occupied_.assign(bins, 0);
    for (std::size_t j = 0; j < bins; ++j) {
        const std::size_t n = pmf.members_[j];
        if (n == 0) {
            continue;
        }
        pmf.occupied_[j] = 1;
        pmf.gamma_[j] = static_cast<double>(n) / static_cast<double>(pmf.total_);
        for (std::size_t l = 0; l < classes; ++l) {
            pmf.probs_[j * classes + l] = static_cast<double>(counts[j * classes + l]) / static_cast<double>(n);
        }
    }
    return pmf;
}

std::vector<double> smooth_pmf(std::span<const double> probs, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw UsageError("smoothing epsilon must be a positive finite number");
    }
    std::vector<double> out(probs.begin(), probs.end());
    double total = 0.0;
    for (auto& v : out) {
        if (v == 0.0) {
            v = epsilon;
        }
        total += v;
    }
    for (auto& v : out) {
        v /= total;
    }
    return out;
}

}  // namespace kld
