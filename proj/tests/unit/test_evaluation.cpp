#include <gtest/gtest.h>

#include <random>
#include <set>

#include "kld/error.hpp"
#include "kld/evaluation.hpp"
#include "kld/generator.hpp"
#include "support/oracles.hpp"

namespace kld {
namespace {

using Z = std::vector<std::size_t>;

TEST(Match, Examples) {
    const auto r = match(Z{50}, Z{53}, 5);
    EXPECT_EQ(r.tp, 1u);
    EXPECT_EQ(r.fp, 0u);
    EXPECT_EQ(r.fn, 0u);
    ASSERT_TRUE(r.mean_delay);
    EXPECT_DOUBLE_EQ(*r.mean_delay, 3.0);

    const auto miss = match(Z{50}, Z{60}, 5);
    EXPECT_EQ(miss.tp, 0u);
    EXPECT_EQ(miss.fp, 1u);
    EXPECT_EQ(miss.fn, 1u);
    EXPECT_FALSE(miss.mean_delay);

    // One detection cannot claim two truths.
    const auto two = match(Z{50, 52}, Z{51}, 5);
    EXPECT_EQ(two.tp, 1u);
    EXPECT_EQ(two.fn, 1u);
    EXPECT_EQ(match(Z{}, Z{}, 5).tp, 0u);
}

TEST(Match, UnsortedInputIsRejected) {
    EXPECT_THROW((void)match(Z{5, 3}, Z{}, 1), DataError);
    EXPECT_THROW((void)match(Z{}, Z{5, 5}, 1), DataError);
}

TEST(Match, GreedyIsOptimal) {
    std::mt19937_64 rng(83);
    std::uniform_int_distribution<std::size_t> pos(0, 60);
    std::uniform_int_distribution<std::size_t> count(0, 7);
    std::uniform_int_distribution<std::size_t> tol(0, 10);
    for (int trial = 0; trial < 2000; ++trial) {
        std::set<std::size_t> ts;
        std::set<std::size_t> ds;
        const auto nt = count(rng);
        const auto nd = count(rng);
        while (ts.size() < nt) {
            ts.insert(pos(rng));
        }
        while (ds.size() < nd) {
            ds.insert(pos(rng));
        }
        const Z t(ts.begin(), ts.end());
        const Z d(ds.begin(), ds.end());
        const auto w = tol(rng);
        const auto r = match(t, d, w);
        ASSERT_EQ(r.tp, oracle::optimal_matches(t, d, w)) << "trial " << trial;
        EXPECT_EQ(r.tp + r.fp, d.size());
        EXPECT_EQ(r.tp + r.fn, t.size());
        for (const auto& [a, b] : r.pairs) {
            EXPECT_LE(a > b ? a - b : b - a, w);
        }
    }
}

TEST(Match, ShiftInvariant) {
    const Z t{10, 40, 90};
    const Z d{12, 35, 47, 88, 120};
    const auto r = match(t, d, 6);
    Z t2;
    Z d2;
    for (auto x : t) {
        t2.push_back(x + 1000);
    }
    for (auto x : d) {
        d2.push_back(x + 1000);
    }
    const auto s = match(t2, d2, 6);
    EXPECT_EQ(r.tp, s.tp);
    EXPECT_EQ(r.fp, s.fp);
    EXPECT_EQ(r.mean_delay, s.mean_delay);
}

TEST(ParseAlphas, RangesAndLists) {
    EXPECT_EQ(parse_alphas("1:2:0.5"), (std::vector<double>{1.0, 1.5, 2.0}));
    EXPECT_EQ(parse_alphas("1.0:3.0:0.25").size(), 9u);
    EXPECT_DOUBLE_EQ(parse_alphas("1.0:3.0:0.25").back(), 3.0);
    EXPECT_EQ(parse_alphas("0.5,2,1"), (std::vector<double>{0.5, 2.0, 1.0}));
    EXPECT_THROW((void)parse_alphas("1:2"), UsageError);
    EXPECT_THROW((void)parse_alphas("2:1:0.5"), UsageError);
    EXPECT_THROW((void)parse_alphas("1,,2"), UsageError);
    EXPECT_THROW((void)parse_alphas("x"), UsageError);
}

class SweepTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        GeneratorConfig gc;
        gc.n_chunks = 400;
        gc.n_drifts = 4;
        gc.chunk_size = 100;
        StreamGenerator gen(gc);
        chunks_ = new std::vector<Chunk>(collect(gen));
        meta_ = new StreamMeta(gc.meta());
    }
    static void TearDownTestSuite() {
        delete chunks_;
        delete meta_;
    }
    static std::vector<Chunk>* chunks_;
    static StreamMeta* meta_;
};
std::vector<Chunk>* SweepTest::chunks_ = nullptr;
StreamMeta* SweepTest::meta_ = nullptr;

TEST_F(SweepTest, CountsAreMonotoneInAlpha) {
    const auto alphas = parse_alphas("0.5:3.0:0.25");
    const auto sweep = alpha_sweep(*chunks_, *meta_, DetectorConfig{}, alphas, 30);
    ASSERT_EQ(sweep.size(), alphas.size());
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        EXPECT_LE(sweep[i].detections, sweep[i - 1].detections) << "alpha " << sweep[i].alpha;
    }
}

TEST_F(SweepTest, SingletonSweepMatchesDirectRun) {
    DetectorConfig c;
    c.alpha = 2.25;
    const auto direct = detect_batch(*chunks_, *meta_, c);
    const std::vector<double> one{2.25};
    const auto sweep = alpha_sweep(*chunks_, *meta_, DetectorConfig{}, one, 30);
    ASSERT_EQ(sweep.size(), 1u);
    EXPECT_EQ(sweep[0].segments, direct.segments);
    EXPECT_EQ(sweep[0].detections, direct.critical_points.size());
    EXPECT_EQ(sweep[0].matching, match(meta_->ground_truth, direct.critical_points, 30));
}

}  // namespace
}  // namespace kld
