/// @file generator.cpp

#include "kld/generator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kld/error.hpp"

namespace kld {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
    for (auto& word : s_) {
        word = splitmix64(seed);
    }
}

Xoshiro256::result_type Xoshiro256::operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t Xoshiro256::below(std::uint64_t n) noexcept {
    // Rejection keeps the result exactly uniform.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t r = (*this)();
    while (r >= limit) {
        r = (*this)();
    }
    return r % n;
}

double Xoshiro256::normal() noexcept {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    return u * f;
}

void GeneratorConfig::validate() const {
    if (p == 0) {
        throw UsageError("generator: p must be at least 1");
    }
    if (classes < 2) {
        throw UsageError("generator: at least two classes are required");
    }
    if (chunk_size == 0 || n_chunks == 0) {
        throw UsageError("generator: chunk size and chunk count must be positive");
    }
    if (n_drifts >= n_chunks) {
        throw UsageError("generator: drift count must be below the chunk count");
    }
    if (!(sigmoid_spacing > 0.0) || !std::isfinite(sigmoid_spacing)) {
        throw UsageError("generator: sigmoid spacing must be positive");
    }
    if (!(class_flip >= 0.0 && class_flip < 1.0)) {
        throw UsageError("generator: class flip must lie in [0, 1)");
    }
    if (clusters_per_class == 0) {
        throw UsageError("generator: at least one cluster per class is required");
    }
    if (!(separation > 0.0) || !std::isfinite(separation) || !(scale > 0.0) || !std::isfinite(scale)) {
        throw UsageError("generator: separation and scale must be positive");
    }
    const std::size_t centers = classes * clusters_per_class;
    if (p < 63 && (std::size_t{1} << p) < centers) {
        throw UsageError("generator: " + std::to_string(centers) + " cluster means do not fit on the 2^" +
                         std::to_string(p) + " hypercube vertices");
    }
}

StreamMeta GeneratorConfig::meta() const {
    StreamMeta m;
    m.dim = p;
    m.classes = classes;
    m.chunk_size = chunk_size;
    m.n_chunks = n_chunks;
    m.ground_truth = drift_schedule(n_chunks, n_drifts);
    m.generator = Xoshiro256::name;
    return m;
}

std::vector<std::size_t> drift_schedule(std::size_t n_chunks, std::size_t n_drifts) {
    if (n_drifts >= n_chunks && n_drifts > 0) {
        throw UsageError("drift count must be below the chunk count");
    }
    std::vector<std::size_t> centers;
    centers.reserve(n_drifts);
    for (std::size_t k = 0; k < n_drifts; ++k) {
        // round((k + 1/2) n / d) in integers.
        centers.push_back(((2 * k + 1) * n_chunks + n_drifts) / (2 * n_drifts));
    }
    return centers;
}

ConceptWeight concept_weight(double x, std::size_t n_chunks, const std::vector<std::size_t>& schedule,
                             double sigmoid_spacing) {
    if (schedule.empty()) {
        return {0, 0.0};
    }
    std::size_t k = 0;
    while (k + 1 < schedule.size() &&
           x >= 0.5 * (static_cast<double>(schedule[k]) + static_cast<double>(schedule[k + 1]))) {
        ++k;
    }
    const double half_gap = 0.5 * static_cast<double>(n_chunks) / static_cast<double>(schedule.size());
    const double z = sigmoid_spacing * (x - static_cast<double>(schedule[k])) / half_gap;
    return {k, 1.0 / (1.0 + std::exp(-z))};
}

std::vector<Concept> draw_concepts(const GeneratorConfig& config, Xoshiro256& rng) {
    config.validate();
    const double half = 0.5 * config.separation;
    auto vertex = [&]() {
        std::vector<double> v(config.p);
        for (auto& x : v) {
            x = (rng() & 1U) != 0 ? half : -half;
        }
        return v;
    };

    std::vector<Concept> concepts;
    for (std::size_t c = 0; c <= config.n_drifts; ++c) {
        Concept next;
        for (int attempt = 0;; ++attempt) {
            if (attempt == 1000) {
                throw UsageError("generator: cannot draw a concept distinct from its predecessor");
            }
            next = Concept{};
            next.scale = config.scale;
            next.means.assign(config.classes, {});
            if (config.classes == 2 && config.clusters_per_class == 1) {
                // Antipodal pair: the farthest two vertices.
                auto v = vertex();
                auto w = v;
                for (auto& x : w) {
                    x = -x;
                }
                next.means[0].push_back(std::move(w));
                next.means[1].push_back(std::move(v));
            } else {
                std::vector<std::vector<double>> used;
                for (std::size_t l = 0; l < config.classes; ++l) {
                    for (std::size_t q = 0; q < config.clusters_per_class; ++q) {
                        auto v = vertex();
                        while (std::find(used.begin(), used.end(), v) != used.end()) {
                            v = vertex();
                        }
                        used.push_back(v);
                        next.means[l].push_back(std::move(v));
                    }
                }
            }
            if (concepts.empty() || !(concepts.back() == next)) {
                break;
            }
        }
        concepts.push_back(std::move(next));
    }
    return concepts;
}

StreamGenerator::StreamGenerator(GeneratorConfig config)
    : config_(std::move(config)), meta_(config_.meta()), rng_(config_.seed) {
    concepts_ = draw_concepts(config_, rng_);
}

std::optional<Chunk> StreamGenerator::next() {
    if (produced_ >= config_.n_chunks) {
        return std::nullopt;
    }
    const std::size_t index = produced_++;
    const std::size_t K = config_.chunk_size;
    const std::size_t p = config_.p;
    const std::size_t L = config_.classes;
    std::vector<double> features(K * p);
    std::vector<Label> labels(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double x = static_cast<double>(index) + static_cast<double>(k) / static_cast<double>(K);
        const auto cw = concept_weight(x, config_.n_chunks, meta_.ground_truth, config_.sigmoid_spacing);
        // Every point consumes the same uniforms whatever branch it takes.
        const double u_concept = rng_.uniform();
        const auto label = static_cast<std::size_t>(rng_.below(L));
        const auto cluster = static_cast<std::size_t>(rng_.below(config_.clusters_per_class));
        const std::size_t concept_id = u_concept < cw.weight ? cw.concept_id + 1 : cw.concept_id;
        const auto& mean = concepts_[concept_id].means[label][cluster];
        for (std::size_t d = 0; d < p; ++d) {
            features[k * p + d] = mean[d] + config_.scale * rng_.normal();
        }
        const double u_flip = rng_.uniform();
        const auto other = static_cast<std::size_t>(rng_.below(L - 1));
        std::size_t observed = label;
        if (u_flip < config_.class_flip) {
            observed = other >= label ? other + 1 : other;
            ++flips_;
        }
        labels[k] = static_cast<Label>(observed);
    }
    return Chunk(index, p, std::move(features), std::move(labels));
}

}  // namespace kld
