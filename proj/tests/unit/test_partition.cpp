#include <gtest/gtest.h>

#include <random>

#include "kld/error.hpp"
#include "kld/partition.hpp"
#include "support/oracles.hpp"

namespace kld {
namespace {

TEST(Grid, UniformSplit) {
    const auto g = Grid::build({{0, 10}}, 5, GridMode::product);
    ASSERT_EQ(g.axes().size(), 1u);
    EXPECT_DOUBLE_EQ(g.axes()[0].width(), 2.0);
    for (int e = 0; e < 5; ++e) {
        EXPECT_EQ(g.cell(0, 2.0 * e), static_cast<std::size_t>(e));
    }
}

TEST(Grid, DegenerateAxisIsWidened) {
    const auto g = Grid::build({{3, 3}}, 5, GridMode::product);
    EXPECT_DOUBLE_EQ(g.axes()[0].lower, 2.5);
    EXPECT_DOUBLE_EQ(g.axes()[0].upper, 3.5);
    EXPECT_NEAR(g.axes()[0].width(), 0.2, 1e-15);
    const auto big = Grid::build({{1e12, 1e12}}, 5, GridMode::product);
    EXPECT_DOUBLE_EQ(big.axes()[0].upper - big.axes()[0].lower, 2e3);
}

TEST(Grid, SlabLayoutHasFiveBinsPerFeature) {
    const Bounds b(4, Interval{0, 1});
    EXPECT_EQ(Grid::build(b, 5, GridMode::slab).bin_count(), 20u);
    EXPECT_EQ(Grid::build(b, 5, GridMode::product).bin_count(), 625u);
    EXPECT_EQ(Grid::build(b, 5, GridMode::slab).memberships_per_point(), 4u);
}

TEST(Grid, BuildErrors) {
    EXPECT_THROW((void)Grid::build({{0, 1}}, 0, GridMode::slab), UsageError);
    EXPECT_THROW((void)Grid::build({{0, std::numeric_limits<double>::infinity()}}, 5, GridMode::slab), DataError);
    EXPECT_THROW((void)Grid::build({{2, 1}}, 5, GridMode::slab), DataError);
}

TEST(Grid, FloorRuleAndClamping) {
    const auto g = Grid::build({{0, 10}}, 5, GridMode::product);
    EXPECT_EQ(g.cell(0, 3.9), 1u);
    EXPECT_EQ(g.cell(0, 10.0), 4u);
    EXPECT_EQ(g.cell(0, 42.0), 4u);
    EXPECT_EQ(g.cell(0, -1.0), 0u);
    EXPECT_THROW((void)g.cell(0, std::nan("")), DataError);
}

TEST(Grid, LocateMatchesEdgeScan) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 7.0);
    const Bounds b{{-3, 7}, {0, 1}, {-1, 6}};
    const std::vector<std::size_t> bins{3, 4, 5};
    const auto g = Grid::build(b, bins, GridMode::product);
    for (int i = 0; i < 2000; ++i) {
        const std::vector<double> x{u(rng), u(rng) / 10.0 + 0.3, u(rng)};
        std::size_t expect = 0;
        for (std::size_t d = 0; d < 3; ++d) {
            expect = expect * bins[d] + oracle::edge_scan(x[d], b[d].lower, b[d].upper, bins[d]);
        }
        EXPECT_EQ(g.locate(x).value, expect);
    }
}

TEST(Grid, MembershipsPartitionThePoints) {
    std::mt19937_64 rng(3);
    const auto c = oracle::random_chunk(rng, 0, 200, 3, 2);
    for (auto mode : {GridMode::slab, GridMode::product}) {
        const auto g = Grid::build(chunk_bounds(c), 4, mode);
        std::vector<std::size_t> sizes(g.bin_count(), 0);
        std::vector<BinIndex> out;
        for (std::size_t k = 0; k < c.size(); ++k) {
            out.clear();
            g.memberships(c.point(k).input, out);
            ASSERT_EQ(out.size(), g.memberships_per_point());
            for (auto b : out) {
                ASSERT_LT(b.value, g.bin_count());
                ++sizes[b.value];
            }
        }
        std::size_t total = 0;
        for (auto s : sizes) {
            total += s;
        }
        EXPECT_EQ(total, c.size() * g.memberships_per_point());
    }
}

TEST(Grid, AffineMapKeepsInteriorAssignments) {
    std::mt19937_64 rng(5);
    const auto c = oracle::random_chunk(rng, 0, 100, 2, 2);
    const auto b = chunk_bounds(c);
    const auto g = Grid::build(b, 5, GridMode::product);
    const double scale[] = {3.0, 0.5};
    const double shift[] = {-7.0, 100.0};
    Bounds mapped;
    for (std::size_t d = 0; d < 2; ++d) {
        mapped.push_back({b[d].lower * scale[d] + shift[d], b[d].upper * scale[d] + shift[d]});
    }
    const auto gm = Grid::build(mapped, 5, GridMode::product);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const auto x = c.point(k).input;
        const std::vector<double> y{x[0] * scale[0] + shift[0], x[1] * scale[1] + shift[1]};
        bool near_edge = false;
        for (std::size_t d = 0; d < 2; ++d) {
            const double t = (x[d] - b[d].lower) / g.axes()[d].width();
            near_edge = near_edge || std::abs(t - std::round(t)) < 1e-9;
        }
        if (!near_edge) {
            EXPECT_EQ(g.locate(x), gm.locate(y));
        }
    }
}

}  // namespace
}  // namespace kld
