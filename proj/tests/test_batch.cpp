#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "superfid/batch.hpp"
#include "superfid/statlab.hpp"

using namespace superfid;

TEST(ShardSizes, SplitsContiguously) {
    EXPECT_EQ(shard_sizes(10, 3), (std::vector<std::uint64_t>{4, 3, 3}));
    EXPECT_EQ(shard_sizes(2, 4), (std::vector<std::uint64_t>{1, 1, 0, 0}));
    EXPECT_THROW(shard_sizes(5, 0), DomainError);
}

TEST(ForEachShard, VisitsEveryShardOnce) {
    for (Execution e : {Execution::Serial, Execution::Parallel}) {
        std::vector<std::atomic<int>> hits(17);
        for_each_shard(17, e, [&](int w) { ++hits[w]; });
        for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    }
}

TEST(ForEachShard, RethrowsLowestFailingShard) {
    try {
        for_each_shard(8, Execution::Parallel, [](int w) {
            if (w >= 3) throw std::runtime_error("shard " + std::to_string(w));
        });
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "shard 3");
    }
}

TEST(HsPurities, SerialAndParallelAreBitwiseEqual) {
    const auto a = hs_purities(3, 5000, {.seed = 1, .shards = 7, .execution = Execution::Serial});
    const auto b = hs_purities(3, 5000, {.seed = 1, .shards = 7, .execution = Execution::Parallel});
    EXPECT_EQ(a, b);
}

TEST(HsPurities, ShardCountChangesTheStream) {
    const auto a = hs_purities(2, 1000, {.seed = 1, .shards = 1});
    const auto b = hs_purities(2, 1000, {.seed = 1, .shards = 2});
    EXPECT_EQ(a.front(), b.front());  // shard 0 starts identically
    EXPECT_NE(a, b);
}

TEST(HsPurities, MeanMatchesClosedForm) {
    const auto p = hs_purities(3, 100000, {.seed = 2, .shards = 8});
    const McEstimate m = mc_mean(p);
    EXPECT_LE(std::abs(m.mean - 0.6), 3.0 * m.std_error);
}

TEST(SampleBatch, SerialAndParallelAreBitwiseEqual) {
    for (MeasureKind m : {MeasureKind::HilbertSchmidt, MeasureKind::Bures, MeasureKind::SuperfidelityG}) {
        for (int n : {2, 3}) {
            const BatchOptions opt{.keep_matrices = true};
            const SampleBatch a = sample_batch(m, n, 300, {.seed = 5, .shards = 4, .execution = Execution::Serial}, opt);
            const SampleBatch b = sample_batch(m, n, 300, {.seed = 5, .shards = 4, .execution = Execution::Parallel}, opt);
            ASSERT_EQ(a.purity_records, b.purity_records);
            ASSERT_EQ(a.matrices.size(), 300u);
            for (std::size_t i = 0; i < a.matrices.size(); ++i) ASSERT_TRUE(a.matrices[i] == b.matrices[i]);
            for (std::size_t i = 0; i < a.eigen_records.size(); ++i) {
                ASSERT_TRUE(std::equal(a.eigen_records[i].values().begin(), a.eigen_records[i].values().end(),
                                       b.eigen_records[i].values().begin()));
            }
            ASSERT_EQ(a.rejection.has_value(), m == MeasureKind::SuperfidelityG && n == 3);
            if (a.rejection) {
                EXPECT_EQ(a.rejection->proposed, b.rejection->proposed);
                EXPECT_EQ(a.rejection->accepted, 300u);
            }
        }
    }
}

TEST(SampleBatch, RecordsAreConsistent) {
    const SampleBatch b = sample_batch(MeasureKind::Bures, 4, 500, {.seed = 6, .shards = 3});
    ASSERT_EQ(b.eigen_records.size(), 500u);
    EXPECT_TRUE(b.matrices.empty());
    for (std::size_t i = 0; i < 500; ++i) {
        double s = 0.0;
        for (double x : b.eigen_records[i].values()) s += x * x;
        ASSERT_NEAR(s, b.purity_records[i], 1e-12);
        ASSERT_GE(b.purity_records[i], 0.25 - 1e-12);
        ASSERT_LE(b.purity_records[i], 1.0 + 1e-12);
    }
}

TEST(SampleBatch, BudgetExhaustionPropagates) {
    EXPECT_THROW(sample_batch(MeasureKind::SuperfidelityG, 3, 200, {.seed = 7, .shards = 2}, {.max_proposals = 1}),
                 BudgetExhausted);
}
