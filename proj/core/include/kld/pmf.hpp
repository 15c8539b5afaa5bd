/// @file pmf.hpp
/// @brief Per-bin class-conditional probability mass functions.

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "kld/partition.hpp"
#include "kld/stream.hpp"

namespace kld {

/// Class-conditional pmf of every bin of a grid, estimated from one chunk,
/// plus the occupancy weight gamma_j of each bin.
///
/// Invariants: class_probs(j) sums to 1 for occupied bins; unoccupied bins
/// hold the uniform placeholder 1/L; the gammas sum to 1 over all bins.
class BinnedPmf {
public:
    [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
    [[nodiscard]] const std::shared_ptr<const Grid>& grid_ptr() const noexcept { return grid_; }
    [[nodiscard]] std::size_t classes() const noexcept { return classes_; }
    [[nodiscard]] std::size_t bin_count() const noexcept { return occupied_.size(); }

    [[nodiscard]] std::span<const double> class_probs(std::size_t bin) const {
        return std::span<const double>(probs_).subspan(bin * classes_, classes_);
    }
    [[nodiscard]] bool occupied(std::size_t bin) const { return occupied_[bin] != 0; }
    [[nodiscard]] double gamma(std::size_t bin) const { return gamma_[bin]; }
    [[nodiscard]] std::span<const double> gammas() const noexcept { return gamma_; }
    /// Number of point memberships that landed in `bin`.
    [[nodiscard]] std::size_t members(std::size_t bin) const { return members_[bin]; }
    [[nodiscard]] std::size_t total_memberships() const noexcept { return total_; }

private:
    friend BinnedPmf estimate(const Chunk&, std::shared_ptr<const Grid>, std::size_t);

    std::shared_ptr<const Grid> grid_;
    std::size_t classes_ = 0;
    std::vector<double> probs_;  // bin-major, classes_ entries per bin
    std::vector<double> gamma_;
    std::vector<std::size_t> members_;
    std::vector<unsigned char> occupied_;
    std::size_t total_ = 0;
};

/// Counts labels per bin and normalizes. gamma_j is the bin's share of all
/// point memberships (K in product mode, K*p in slab mode).
[[nodiscard]] BinnedPmf estimate(const Chunk& chunk, std::shared_ptr<const Grid> grid, std::size_t classes);

/// Replaces every zero entry by `epsilon` and renormalizes to sum 1.
/// Throws UsageError unless epsilon > 0.
[[nodiscard]] std::vector<double> smooth_pmf(std::span<const double> probs, double epsilon);

}  // namespace kld
