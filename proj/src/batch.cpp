#include "superfid/batch.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace superfid {

std::vector<std::uint64_t> shard_sizes(std::uint64_t count, int shards) {
    if (shards < 1) throw DomainError("shard_sizes: need at least one shard");
    const auto s = static_cast<std::uint64_t>(shards);
    std::vector<std::uint64_t> sizes(s, count / s);
    for (std::uint64_t w = 0; w < count % s; ++w) ++sizes[w];
    return sizes;
}

void for_each_shard(int shards, Execution execution, const std::function<void(int)>& body) {
    if (shards < 1) throw DomainError("for_each_shard: need at least one shard");
    if (execution == Execution::Serial) {
        for (int w = 0; w < shards; ++w) body(w);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(shards));
#pragma omp parallel for schedule(dynamic, 1)
    for (int w = 0; w < shards; ++w) {
        try {
            body(w);
        } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

namespace {

std::vector<std::uint64_t> offsets_of(const std::vector<std::uint64_t>& sizes) {
    std::vector<std::uint64_t> off(sizes.size(), 0);
    for (std::size_t w = 1; w < sizes.size(); ++w) off[w] = off[w - 1] + sizes[w - 1];
    return off;
}

}  // namespace

std::vector<double> hs_purities(int n, std::uint64_t count, const ShardPlan& plan) {
    const auto sizes = shard_sizes(count, plan.shards);
    const auto offsets = offsets_of(sizes);
    std::vector<double> out(count);
    for_each_shard(plan.shards, plan.execution, [&](int w) {
        RngStream rng(plan.seed, static_cast<std::uint64_t>(w));
        const std::uint64_t base = offsets[w];
        for (std::uint64_t i = 0; i < sizes[w]; ++i) {
            out[base + i] = purity(sample_hs(n, rng));
        }
    });
    return out;
}

SampleBatch sample_batch(MeasureKind measure, int n, std::uint64_t count, const ShardPlan& plan,
                         const BatchOptions& options) {
    const auto sizes = shard_sizes(count, plan.shards);
    const auto offsets = offsets_of(sizes);
    const bool rejection = measure == MeasureKind::SuperfidelityG && n >= 3;

    std::vector<std::optional<EigenvalueVector>> eigs(count);
    std::vector<double> purities(count);
    std::vector<ComplexMatrix> matrices(options.keep_matrices ? count : 0);
    std::vector<RejectionReport> reports(sizes.size());

    for_each_shard(plan.shards, plan.execution, [&](int w) {
        RngStream rng(plan.seed, static_cast<std::uint64_t>(w));
        const std::uint64_t base = offsets[w];
        RejectionReport& report = reports[static_cast<std::size_t>(w)];
        if (rejection) {
            report.bound_constant = rejection_constant_c(n);
            report.envelope_sup = verified_envelope(n).bound;
        }
        for (std::uint64_t i = 0; i < sizes[w]; ++i) {
            DensityMatrix rho = sample_state(measure, n, rng, &report, options.max_proposals);
            eigs[base + i] = spectrum(rho);
            purities[base + i] = purity(rho);
            if (options.keep_matrices) matrices[base + i] = rho.matrix();
        }
    });

    SampleBatch batch;
    batch.measure = measure;
    batch.dim = n;
    batch.seed = plan.seed;
    batch.shards = plan.shards;
    batch.eigen_records.reserve(count);
    for (auto& e : eigs) batch.eigen_records.push_back(std::move(*e));
    batch.purity_records = std::move(purities);
    batch.matrices = std::move(matrices);
    if (rejection) {
        RejectionReport total;
        for (const auto& r : reports) total.merge(r);
        batch.rejection = total;
    }
    return batch;
}

}  // namespace superfid
