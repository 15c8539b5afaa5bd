#include <gtest/gtest.h>

#include <cmath>

#include "kld/error.hpp"
#include "kld/generator.hpp"

namespace kld {
namespace {

GeneratorConfig small(std::uint64_t seed = 7) {
    GeneratorConfig c;
    c.seed = seed;
    c.n_chunks = 40;
    c.chunk_size = 50;
    c.n_drifts = 2;
    return c;
}

TEST(Xoshiro, KnownFirstOutputsAreStable) {
    Xoshiro256 a(42);
    Xoshiro256 b(42);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a(), b());
    }
    Xoshiro256 c(43);
    EXPECT_NE(Xoshiro256(42)(), c());
}

TEST(Xoshiro, UniformAndBelowRanges) {
    Xoshiro256 r(5);
    std::vector<std::size_t> hist(3, 0);
    for (int i = 0; i < 30000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ++hist[r.below(3)];
    }
    for (auto h : hist) {
        EXPECT_NEAR(static_cast<double>(h), 10000.0, 5 * std::sqrt(30000 * (1.0 / 3) * (2.0 / 3)));
    }
}

TEST(Xoshiro, NormalMoments) {
    Xoshiro256 r(9);
    const int n = 200000;
    double s = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(Generator, SameSeedSameStream) {
    StreamGenerator a(small());
    StreamGenerator b(small());
    const auto ca = collect(a);
    const auto cb = collect(b);
    ASSERT_EQ(ca.size(), 40u);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        EXPECT_TRUE(std::equal(ca[i].features().begin(), ca[i].features().end(), cb[i].features().begin()));
        EXPECT_TRUE(std::equal(ca[i].labels().begin(), ca[i].labels().end(), cb[i].labels().begin()));
    }
    StreamGenerator c(small(8));
    const auto cc = collect(c);
    EXPECT_FALSE(std::equal(ca[0].features().begin(), ca[0].features().end(), cc[0].features().begin()));
}

TEST(Generator, ChunkShape) {
    auto cfg = small();
    cfg.p = 3;
    cfg.classes = 4;
    StreamGenerator g(cfg);
    std::size_t n = 0;
    while (auto ch = g.next()) {
        EXPECT_EQ(ch->index(), n++);
        EXPECT_EQ(ch->size(), 50u);
        EXPECT_EQ(ch->dim(), 3u);
        for (auto l : ch->labels()) {
            EXPECT_LT(l, 4u);
        }
    }
    EXPECT_EQ(n, 40u);
    EXPECT_EQ(g.meta().ground_truth, (std::vector<std::size_t>{10, 30}));
}

TEST(Schedule, Examples) {
    const auto s = drift_schedule(10000, 20);
    ASSERT_EQ(s.size(), 20u);
    EXPECT_EQ(s.front(), 250u);
    for (std::size_t k = 1; k < s.size(); ++k) {
        EXPECT_EQ(s[k] - s[k - 1], 500u);
    }
    EXPECT_EQ(drift_schedule(100, 1), (std::vector<std::size_t>{50}));
    EXPECT_TRUE(drift_schedule(100, 0).empty());
    EXPECT_THROW((void)drift_schedule(5, 5), UsageError);
}

TEST(ConceptWeight, HalfAtCenterAndMonotone) {
    const std::vector<std::size_t> sched{50};
    EXPECT_DOUBLE_EQ(concept_weight(50.0, 100, sched, 99).weight, 0.5);
    double prev = -1.0;
    for (double x = 0; x < 100; x += 0.25) {
        const double w = concept_weight(x, 100, sched, 5).weight;
        EXPECT_GE(w, prev);
        prev = w;
    }
}

TEST(ConceptWeight, LargeSpacingIsNearlyAbrupt) {
    const std::vector<std::size_t> sched{50};
    EXPECT_LT(concept_weight(49.5, 100, sched, 999).weight, 0.01);
    EXPECT_GT(concept_weight(50.5, 100, sched, 999).weight, 0.99);
}

TEST(ConceptWeight, RegionsSplitAtMidpoints) {
    const std::vector<std::size_t> sched{25, 75};
    EXPECT_EQ(concept_weight(49.9, 100, sched, 99).concept_id, 0u);
    EXPECT_EQ(concept_weight(50.0, 100, sched, 99).concept_id, 1u);
    EXPECT_DOUBLE_EQ(concept_weight(75.0, 100, sched, 99).weight, 0.5);
}

TEST(Concepts, ConsecutiveDifferAndAreSeparated) {
    for (std::size_t clusters : {1u, 2u}) {
        auto cfg = small();
        cfg.n_drifts = 10;
        cfg.clusters_per_class = clusters;
        Xoshiro256 rng(cfg.seed);
        const auto cs = draw_concepts(cfg, rng);
        ASSERT_EQ(cs.size(), 11u);
        for (std::size_t i = 1; i < cs.size(); ++i) {
            EXPECT_FALSE(cs[i] == cs[i - 1]);
        }
        for (const auto& c : cs) {
            std::vector<std::vector<double>> all;
            for (const auto& cls : c.means) {
                all.insert(all.end(), cls.begin(), cls.end());
            }
            for (std::size_t a = 0; a < all.size(); ++a) {
                for (std::size_t b = a + 1; b < all.size(); ++b) {
                    double d2 = 0.0;
                    for (std::size_t d = 0; d < cfg.p; ++d) {
                        d2 += (all[a][d] - all[b][d]) * (all[a][d] - all[b][d]);
                    }
                    EXPECT_GE(std::sqrt(d2), cfg.separation - 1e-12);
                }
            }
        }
    }
}

TEST(Generator, NearestMeanClassifierIsAccurateWithoutFlips) {
    auto cfg = small();
    cfg.n_drifts = 0;
    cfg.class_flip = 0.0;
    StreamGenerator g(cfg);
    const auto& means = g.concepts()[0].means;
    std::size_t right = 0;
    std::size_t total = 0;
    while (auto ch = g.next()) {
        for (std::size_t k = 0; k < ch->size(); ++k) {
            const auto x = ch->features().subspan(k * cfg.p, cfg.p);
            std::size_t best = 0;
            double best_d = INFINITY;
            for (std::size_t l = 0; l < means.size(); ++l) {
                double d2 = 0.0;
                for (std::size_t d = 0; d < cfg.p; ++d) {
                    d2 += (x[d] - means[l][0][d]) * (x[d] - means[l][0][d]);
                }
                if (d2 < best_d) {
                    best_d = d2;
                    best = l;
                }
            }
            right += best == ch->labels()[k] ? 1 : 0;
            ++total;
        }
    }
    EXPECT_GT(static_cast<double>(right) / static_cast<double>(total), 0.9);
}

TEST(Generator, FlipRateMatchesConfiguration) {
    auto cfg = small();
    cfg.n_chunks = 500;
    cfg.chunk_size = 250;
    cfg.class_flip = 0.05;
    StreamGenerator g(cfg);
    (void)collect(g);
    const double n = 500.0 * 250.0;
    const double rate = static_cast<double>(g.flips()) / n;
    EXPECT_NEAR(rate, 0.05, 3.0 * std::sqrt(0.05 * 0.95 / n));
}

TEST(GeneratorConfig, Validation) {
    EXPECT_NO_THROW(GeneratorConfig{}.validate());
    auto c = small();
    c.classes = 1;
    EXPECT_THROW(c.validate(), UsageError);
    c = small();
    c.class_flip = 1.0;
    EXPECT_THROW(c.validate(), UsageError);
    c = small();
    c.p = 1;
    c.classes = 3;
    EXPECT_THROW(c.validate(), UsageError);
    c = small();
    c.n_drifts = 40;
    EXPECT_THROW(c.validate(), UsageError);
}

}  // namespace
}  // namespace kld
