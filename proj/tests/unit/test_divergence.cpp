#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "kld/divergence.hpp"
#include "kld/error.hpp"
#include "support/oracles.hpp"

namespace kld {
namespace {

using V = std::vector<double>;

TEST(Kl, KnownValues) {
    EXPECT_NEAR(kl(V{0.5, 0.5}, V{0.25, 0.75}), 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15);
    EXPECT_NEAR(kl(V{0.5, 0.5}, V{0.25, 0.75}), 0.14384, 1e-5);
    EXPECT_NEAR(kl(V{0.25, 0.75}, V{0.5, 0.5}), 0.13081, 1e-5);
    EXPECT_EQ(kl(V{0.2, 0.3, 0.5}, V{0.2, 0.3, 0.5}), 0.0);
}

TEST(Kl, ZeroConventionOnP) { EXPECT_NEAR(kl(V{1.0, 0.0}, V{0.5, 0.5}), std::log(2.0), 1e-15); }

TEST(Kl, Errors) {
    EXPECT_THROW((void)kl(V{0.5, 0.5}, V{1.0}), DataError);
    EXPECT_THROW((void)kl(V{0.5, 0.5}, V{1.0, 0.0}), DataError);
    EXPECT_THROW((void)kl(V{0.6, 0.6}, V{0.5, 0.5}), DataError);
    EXPECT_THROW((void)kl(V{1.5, -0.5}, V{0.5, 0.5}), DataError);
}

TEST(Kl, PropertiesAgainstOracle) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t L = 2 + trial % 5;
        const auto p = smooth_pmf(oracle::random_simplex(rng, L, true), 1e-6);
        const auto q = smooth_pmf(oracle::random_simplex(rng, L, true), 1e-6);
        const double d = kl(p, q);
        EXPECT_GE(d, 0.0);
        EXPECT_NEAR(d, oracle::kl(p, q), 1e-10);
        double tv = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            tv += 0.5 * std::abs(p[l] - q[l]);
        }
        EXPECT_LE(2.0 * tv * tv, d + 1e-12);
        // Consistent relabelling leaves the divergence unchanged.
        V pr(p.rbegin(), p.rend());
        V qr(q.rbegin(), q.rend());
        EXPECT_NEAR(kl(pr, qr), d, 1e-12);
    }
}

TEST(Aggregate, UnweightedAndWeighted) {
    const std::vector<BinDivergence> d{{{0}, 0.2}, {{1}, 0.4}};
    EXPECT_NEAR(aggregate(d, V{0.75, 0.25}, Weighting::unweighted), 0.3, 1e-15);
    EXPECT_NEAR(aggregate(d, V{0.75, 0.25}, Weighting::weighted), 0.125, 1e-15);
    EXPECT_NEAR(aggregate(d, V{0.75, 0.25}, Weighting::weighted, false), 0.25, 1e-15);
    // Reference weights renormalise over the compared bins only.
    EXPECT_NEAR(aggregate(d, V{0.375, 0.125, 0.5}, Weighting::weighted), 0.125, 1e-15);
    const std::vector<BinDivergence> c{{{0}, 0.7}, {{3}, 0.7}, {{4}, 0.7}};
    EXPECT_NEAR(aggregate(c, V{0.1, 0.2, 0.3, 0.2, 0.2}, Weighting::unweighted), 0.7, 1e-15);
}

TEST(Aggregate, EmptyInputIsAnError) {
    try {
        (void)aggregate({}, V{}, Weighting::weighted);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_STREQ(e.what(), "no overlapping occupied bins");
    }
}

TEST(Aggregate, WeightedBoundedByMaxOverJ) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t J = 1 + trial % 10;
        std::vector<BinDivergence> d;
        double mx = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            d.push_back({{j}, u(rng)});
            mx = std::max(mx, d.back().value);
        }
        const auto g = oracle::random_simplex(rng, J, false);
        const double w = aggregate(d, g, Weighting::weighted);
        EXPECT_GE(w, 0.0);
        EXPECT_LE(w, mx / static_cast<double>(J) + 1e-15);
    }
}

TEST(BinDivergences, IdenticalChunksGiveZero) {
    std::mt19937_64 rng(29);
    const auto c = oracle::random_chunk(rng, 0, 100, 3, 2);
    const auto g = std::make_shared<const Grid>(Grid::build(chunk_bounds(c), 5, GridMode::slab));
    const auto a = estimate(c, g, 2);
    const auto r = bin_divergences(a, a, 1e-6);
    for (const auto& d : r.per_bin) {
        EXPECT_EQ(d.value, 0.0);
    }
    EXPECT_EQ(r.per_bin.size() + r.skipped, g->bin_count());
}

TEST(BinDivergences, SkipsBinsUnoccupiedOnEitherSide) {
    const auto g = std::make_shared<const Grid>(Grid::build({{0, 10}}, 2, GridMode::product));
    const Chunk a(0, 1, {1, 2, 8}, {0, 1, 0});
    const Chunk b(1, 1, {1, 2, 3}, {0, 0, 1});
    const auto r = bin_divergences(estimate(a, g, 2), estimate(b, g, 2), 1e-6);
    ASSERT_EQ(r.per_bin.size(), 1u);
    EXPECT_EQ(r.per_bin[0].bin.value, 0u);
    EXPECT_EQ(r.skipped, 1u);
}

TEST(BinDivergences, GridMismatchIsAnError) {
    const Chunk a(0, 1, {1, 2}, {0, 1});
    const auto g1 = std::make_shared<const Grid>(Grid::build({{0, 10}}, 2, GridMode::product));
    const auto g2 = std::make_shared<const Grid>(Grid::build({{0, 11}}, 2, GridMode::product));
    EXPECT_THROW((void)bin_divergences(estimate(a, g1, 2), estimate(a, g2, 2), 1e-6), DataError);
}

TEST(BinDivergences, MatchesPerBinOracle) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_chunk(rng, 0, 60, 2, 2);
        const auto b = oracle::random_chunk(rng, 1, 60, 2, 2);
        const auto g = std::make_shared<const Grid>(Grid::build(chunk_bounds(a, b), 4, GridMode::slab));
        const auto pa = estimate(a, g, 2);
        const auto pb = estimate(b, g, 2);
        const auto r = bin_divergences(pa, pb, 1e-6);
        std::size_t i = 0;
        for (std::size_t j = 0; j < g->bin_count(); ++j) {
            if (!pa.occupied(j) || !pb.occupied(j)) {
                continue;
            }
            const V p(pa.class_probs(j).begin(), pa.class_probs(j).end());
            const V q(pb.class_probs(j).begin(), pb.class_probs(j).end());
            ASSERT_LT(i, r.per_bin.size());
            EXPECT_EQ(r.per_bin[i].bin.value, j);
            EXPECT_NEAR(r.per_bin[i].value, oracle::kl(p, oracle::smooth(q, 1e-6)), 1e-10);
            ++i;
        }
        EXPECT_EQ(i, r.per_bin.size());
    }
}

TEST(Compare, UsesReferenceChunkWeights) {
    const auto g = std::make_shared<const Grid>(Grid::build({{0, 10}}, 2, GridMode::product));
    // Reference: 3 points in bin 0, 1 in bin 1. Next: 1 and 3.
    const Chunk a(0, 1, {1, 2, 3, 8}, {0, 0, 1, 1});
    const Chunk b(1, 1, {1, 7, 8, 9}, {1, 0, 0, 1});
    const auto pa = estimate(a, g, 2);
    const auto pb = estimate(b, g, 2);
    const auto d = compare(pa, pb, 1e-6);
    const double d0 = oracle::kl({2.0 / 3, 1.0 / 3}, oracle::smooth({0, 1}, 1e-6));
    const double d1 = oracle::kl({0, 1}, {2.0 / 3, 1.0 / 3});
    EXPECT_NEAR(d.value_unweighted, (d0 + d1) / 2, 1e-12);
    EXPECT_NEAR(d.value_weighted, (0.75 * d0 + 0.25 * d1) / 2, 1e-12);
    EXPECT_EQ(d.skipped_bins, 0u);
}

}  // namespace
}  // namespace kld
