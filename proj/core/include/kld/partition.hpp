/// @file partition.hpp
/// @brief Regular axis-aligned grids over the input space.
///
/// Two layouts are supported. In product mode the grid is the full Cartesian
/// product of per-axis cells (J = prod bins_d) and every point falls in exactly
/// one bin. In slab mode each bin is one axis interval extended across all
/// other axes (J = sum bins_d); every point belongs to one slab per axis, so a
/// p-dimensional point has p memberships. Slab mode with 5 bins per axis gives
/// J = 5p bins while staying linear in p.

#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "kld/stream.hpp"

namespace kld {

enum class GridMode { slab, product };

[[nodiscard]] std::string_view to_string(GridMode mode);
[[nodiscard]] GridMode grid_mode_from_string(std::string_view text);

/// Flat bin identifier in 0..J-1.
struct BinIndex {
    std::size_t value = 0;
    friend auto operator<=>(const BinIndex&, const BinIndex&) = default;
};

/// Uniform partition of one axis.
struct Axis {
    double lower = 0.0;
    double upper = 1.0;
    std::size_t bins = 1;

    [[nodiscard]] double width() const noexcept { return (upper - lower) / static_cast<double>(bins); }
    friend bool operator==(const Axis&, const Axis&) = default;
};

class Grid {
public:
    /// Builds a grid over `bounds`. Degenerate axes (lower == upper) are widened
    /// to center +/- max(0.5, |center| * 1e-9).
    static Grid build(const Bounds& bounds, std::span<const std::size_t> bins_per_dim, GridMode mode);
    /// Same bin count on every axis.
    static Grid build(const Bounds& bounds, std::size_t bins_per_dim, GridMode mode);

    [[nodiscard]] std::size_t dim() const noexcept { return axes_.size(); }
    [[nodiscard]] GridMode mode() const noexcept { return mode_; }
    [[nodiscard]] const std::vector<Axis>& axes() const noexcept { return axes_; }
    /// Total bin count J.
    [[nodiscard]] std::size_t bin_count() const noexcept { return bin_count_; }
    /// Bins each point belongs to: 1 in product mode, dim() in slab mode.
    [[nodiscard]] std::size_t memberships_per_point() const noexcept {
        return mode_ == GridMode::product ? 1 : axes_.size();
    }

    /// Cell coordinate along axis d: floor((x - lower) / width), clamped to
    /// [0, bins - 1]. Throws DataError on a non-finite coordinate.
    [[nodiscard]] std::size_t cell(std::size_t d, double x) const;

    /// Row-major flat index of the product cell containing `point` (the last
    /// axis varies fastest). Only meaningful in product mode.
    [[nodiscard]] BinIndex locate(std::span<const double> point) const;

    /// Appends the bins `point` belongs to under this grid's mode.
    void memberships(std::span<const double> point, std::vector<BinIndex>& out) const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    Grid(std::vector<Axis> axes, GridMode mode);

    std::vector<Axis> axes_;
    GridMode mode_ = GridMode::slab;
    std::size_t bin_count_ = 0;
    std::vector<std::size_t> offsets_;  // slab mode: first bin of each axis
};

}  // namespace kld
