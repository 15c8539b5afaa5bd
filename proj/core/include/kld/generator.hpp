/// @file generator.hpp
/// @brief Seeded synthetic streams with incremental drifts at known positions.
///
/// Each concept assigns every class a few isotropic Gaussian clusters whose
/// means sit on distinct vertices of the hypercube {-sep/2, +sep/2}^p, so any
/// two means are at least `separation` apart. Around every drift center the
/// generator blends concept c into c+1: a point at stream position x is drawn
/// from c+1 with probability w = 1 / (1 + exp(-s (x - center) / half_gap)),
/// where s is the sigmoid spacing and half_gap half the drift period.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kld/stream.hpp"

namespace kld {

/// xoshiro256** seeded through splitmix64. Portable and bit-exact.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed);

    result_type operator()() noexcept;
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform integer in [0, n) by rejection; n > 0.
    std::uint64_t below(std::uint64_t n) noexcept;
    /// Standard normal via the Marsaglia polar method.
    double normal() noexcept;

    static constexpr const char* name = "xoshiro256**/splitmix64";

private:
    std::array<std::uint64_t, 4> s_{};
    std::optional<double> spare_;
};

struct GeneratorConfig {
    std::uint64_t seed = 1410;
    std::size_t p = 4;
    std::size_t classes = 2;
    std::size_t n_chunks = 10000;
    std::size_t chunk_size = 250;
    std::size_t n_drifts = 20;
    double sigmoid_spacing = 99.0;
    double class_flip = 0.01;
    std::size_t clusters_per_class = 1;
    double separation = 3.0;
    double scale = 1.0;  ///< isotropic standard deviation of every cluster

    /// Throws UsageError on an invalid combination.
    void validate() const;
    [[nodiscard]] StreamMeta meta() const;

    friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

struct Concept {
    /// means[l][c] is the mean of cluster c of class l.
    std::vector<std::vector<std::vector<double>>> means;
    double scale = 1.0;

    friend bool operator==(const Concept&, const Concept&) = default;
};

/// Evenly spaced drift centers: round((k + 1/2) n_chunks / n_drifts).
/// Throws UsageError when n_drifts >= n_chunks.
[[nodiscard]] std::vector<std::size_t> drift_schedule(std::size_t n_chunks, std::size_t n_drifts);

struct ConceptWeight {
    std::size_t concept_id = 0;  ///< blending from concept_id into concept_id + 1
    double weight = 0.0;         ///< probability of drawing from concept_id + 1
};

/// Blend state at stream position x (chunk index, fractional within a chunk).
/// Drift k governs the positions between the midpoints to its neighbours.
[[nodiscard]] ConceptWeight concept_weight(double x, std::size_t n_chunks, const std::vector<std::size_t>& schedule,
                                           double sigmoid_spacing);

/// Draws n_drifts + 1 concepts; consecutive concepts never coincide.
[[nodiscard]] std::vector<Concept> draw_concepts(const GeneratorConfig& config, Xoshiro256& rng);

/// Lazy chunk source over a generated stream.
class StreamGenerator final : public ChunkSource {
public:
    explicit StreamGenerator(GeneratorConfig config);

    std::optional<Chunk> next() override;
    [[nodiscard]] const StreamMeta& meta() const override { return meta_; }

    [[nodiscard]] const std::vector<Concept>& concepts() const noexcept { return concepts_; }
    [[nodiscard]] const GeneratorConfig& config() const noexcept { return config_; }
    /// Labels flipped so far.
    [[nodiscard]] std::size_t flips() const noexcept { return flips_; }

private:
    GeneratorConfig config_;
    StreamMeta meta_;
    Xoshiro256 rng_;
    std::vector<Concept> concepts_;
    std::size_t produced_ = 0;
    std::size_t flips_ = 0;
};

}  // namespace kld
