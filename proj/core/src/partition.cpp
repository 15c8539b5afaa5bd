/// @file partition.cpp

#include "kld/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kld/error.hpp"

namespace kld {

std::string_view to_string(GridMode mode) { return mode == GridMode::slab ? "slab" : "product"; }

GridMode grid_mode_from_string(std::string_view text) {
    if (text == "slab") {
        return GridMode::slab;
    }
    if (text == "product") {
        return GridMode::product;
    }
    throw UsageError("unknown bins mode '" + std::string(text) + "' (expected slab or product)");
}

Grid::Grid(std::vector<Axis> axes, GridMode mode) : axes_(std::move(axes)), mode_(mode) {
    if (mode_ == GridMode::product) {
        bin_count_ = 1;
        for (const auto& a : axes_) {
            if (bin_count_ > std::numeric_limits<std::size_t>::max() / a.bins) {
                throw UsageError("product grid has too many cells");
            }
            bin_count_ *= a.bins;
        }
    } else {
        offsets_.reserve(axes_.size());
        for (const auto& a : axes_) {
            offsets_.push_back(bin_count_);
            bin_count_ += a.bins;
        }
    }
}

Grid Grid::build(const Bounds& bounds, std::span<const std::size_t> bins_per_dim, GridMode mode) {
    if (bounds.empty()) {
        throw UsageError("grid needs at least one dimension");
    }
    if (bins_per_dim.size() != bounds.size()) {
        throw UsageError("grid needs one bin count per dimension");
    }
    std::vector<Axis> axes;
    axes.reserve(bounds.size());
    for (std::size_t d = 0; d < bounds.size(); ++d) {
        double lo = bounds[d].lower;
        double hi = bounds[d].upper;
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw DataError("grid bounds must be finite");
        }
        if (lo > hi) {
            throw DataError("grid lower bound exceeds upper bound on axis " + std::to_string(d));
        }
        if (bins_per_dim[d] == 0) {
            throw UsageError("grid needs at least one bin per dimension");
        }
        if (lo == hi) {
            const double half = std::max(0.5, std::abs(lo) * 1e-9);
            lo -= half;
            hi += half;
        }
        axes.push_back({lo, hi, bins_per_dim[d]});
    }
    return Grid(std::move(axes), mode);
}

Grid Grid::build(const Bounds& bounds, std::size_t bins_per_dim, GridMode mode) {
    const std::vector<std::size_t> bins(bounds.size(), bins_per_dim);
    return build(bounds, bins, mode);
}

std::size_t Grid::cell(std::size_t d, double x) const {
    if (!std::isfinite(x)) {
        throw DataError("cannot locate a non-finite coordinate");
    }
    const Axis& a = axes_[d];
    const double pos = std::floor((x - a.lower) / a.width());
    if (pos <= 0.0) {
        return 0;
    }
    const auto last = static_cast<double>(a.bins - 1);
    return pos >= last ? a.bins - 1 : static_cast<std::size_t>(pos);
}

BinIndex Grid::locate(std::span<const double> point) const {
    if (point.size() != axes_.size()) {
        throw DataError("point dimensionality does not match the grid");
    }
    std::size_t flat = 0;
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        flat = flat * axes_[d].bins + cell(d, point[d]);
    }
    return {flat};
}

void Grid::memberships(std::span<const double> point, std::vector<BinIndex>& out) const {
    if (mode_ == GridMode::product) {
        out.push_back(locate(point));
        return;
    }
    if (point.size() != axes_.size()) {
        throw DataError("point dimensionality does not match the grid");
    }
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        out.push_back({offsets_[d] + cell(d, point[d])});
    }
}

}  // namespace kld
