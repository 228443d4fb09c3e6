#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "superfid/core.hpp"
#include "superfid/densities.hpp"
#include "superfid/samplers.hpp"

namespace superfid {

enum class Execution { Serial, Parallel };

/// A batch of `count` samples is split into `shards` contiguous blocks; block w
/// draws from RngStream(seed, w). Results depend on (seed, shards) only, never
/// on the number of threads or on Execution.
struct ShardPlan {
    std::uint64_t seed = 0;
    int shards = 1;
    Execution execution = Execution::Parallel;
};

/// Block sizes; the first count % shards blocks get one extra sample.
std::vector<std::uint64_t> shard_sizes(std::uint64_t count, int shards);

/// Runs body(w) for w in [0, shards). Serial runs in order; Parallel uses an
/// OpenMP loop. An exception from any shard is rethrown (lowest shard first).
void for_each_shard(int shards, Execution execution, const std::function<void(int)>& body);

/// Purities tr(rho^2) of `count` Hilbert-Schmidt states, in sample order.
std::vector<double> hs_purities(int n, std::uint64_t count, const ShardPlan& plan);

struct SampleBatch {
    MeasureKind measure = MeasureKind::HilbertSchmidt;
    int dim = 0;
    std::uint64_t seed = 0;
    int shards = 1;
    std::vector<EigenvalueVector> eigen_records;
    std::vector<double> purity_records;
    std::vector<ComplexMatrix> matrices;  ///< only filled when requested
    std::optional<RejectionReport> rejection;
};

struct BatchOptions {
    bool keep_matrices = false;
    std::optional<std::uint64_t> max_proposals;  ///< per accepted sample
};

SampleBatch sample_batch(MeasureKind measure, int n, std::uint64_t count, const ShardPlan& plan,
                         const BatchOptions& options = {});

}  // namespace superfid
