/// @file divergence.hpp
/// @brief KL divergence between pmfs and the chunk-pair similarity metric.
///
/// All logarithms are natural, so divergences are in nats. The KL direction is
/// KL(reference || next): the earlier chunk is the reference.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "kld/partition.hpp"
#include "kld/pmf.hpp"

namespace kld {

/// sum_l p_l * ln(p_l / q_l) with 0 * ln(0/q) = 0. Both arguments must be
/// probability vectors of equal length (sums within 1e-9); q must be positive
/// wherever p is. Tiny negative rounding results are clamped to 0.
[[nodiscard]] double kl(std::span<const double> p, std::span<const double> q);

struct BinDivergence {
    BinIndex bin;
    double value = 0.0;
    friend bool operator==(const BinDivergence&, const BinDivergence&) = default;
};

struct BinDivergences {
    std::vector<BinDivergence> per_bin;  ///< bins occupied in both chunks, ascending
    std::size_t skipped = 0;             ///< bins unoccupied in either chunk
};

/// d_j = kl(a_j, smooth_pmf(b_j, epsilon)) for every bin occupied in both
/// pmfs. Throws DataError when the pmfs use different grids or class counts.
[[nodiscard]] BinDivergences bin_divergences(const BinnedPmf& a, const BinnedPmf& b, double epsilon);

enum class Weighting { unweighted, weighted };

[[nodiscard]] std::string_view to_string(Weighting w);
[[nodiscard]] Weighting weighting_from_string(std::string_view text);

/// Averages per-bin divergences over the J' compared bins.
///
/// unweighted: (1/J') * sum d_j.
/// weighted:   (1/J') * sum g_j d_j where g are the reference-chunk gammas
///             renormalized over the compared bins. With `jay_factor` false the
///             1/J' factor is dropped and the result is a plain weighted mean.
///
/// Throws DataError("no overlapping occupied bins") when per_bin is empty.
[[nodiscard]] double aggregate(std::span<const BinDivergence> per_bin, std::span<const double> reference_gammas,
                               Weighting mode, bool jay_factor = true);

/// Similarity of one chunk pair (i, i+1).
struct ChunkDistance {
    std::size_t first = 0;  ///< index i of the reference chunk
    std::vector<BinDivergence> per_bin;
    double value_unweighted = 0.0;
    double value_weighted = 0.0;
    std::size_t skipped_bins = 0;

    [[nodiscard]] double value(Weighting w) const noexcept {
        return w == Weighting::weighted ? value_weighted : value_unweighted;
    }
};

/// Both aggregates for a reference/next pmf pair built on the same grid.
[[nodiscard]] ChunkDistance compare(const BinnedPmf& reference, const BinnedPmf& next, double epsilon,
                                    bool jay_factor = true, std::size_t first_index = 0);

}  // namespace kld
