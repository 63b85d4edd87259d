#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "measures.hpp"

// Time-bucketed end-to-end runs: per-bucket prior selection, conjugate
// update, posterior sampling, and measure summarization.

namespace sentibayes {

struct BucketObservation {
    std::string bucket_id;  // ISO-8601 date or opaque label
    SentimentCounts counts;
};

enum class PriorMode {
    Independent,  // every bucket starts from the base prior
    Sequential,   // each bucket's posterior feeds the next bucket's prior
};

struct PriorPolicy {
    PriorMode mode;
    DirichletParams base_prior;
};

struct BucketResult {
    std::string bucket_id;
    DirichletParams prior;
    SentimentCounts counts;
    DirichletParams posterior;
    std::map<MeasureKind, MeasureSummary> summaries;
};

// Runs the full per-bucket procedure over ordered observations. Buckets
// must be strictly increasing by bucket_id. Each bucket samples with its
// own stream seed mix_seed(seed, ordinal), so one user-facing seed yields
// independent randomness per bucket. Empty-count buckets are legal and
// produce prior-equal posteriors.
inline std::vector<BucketResult> run(const std::vector<BucketObservation>& observations,
                                     const PriorPolicy& policy,
                                     const std::vector<MeasureKind>& kinds, std::size_t n_draws,
                                     std::uint64_t seed, double ci_mass, std::size_t bins = 50) {
    if (observations.empty()) {
        throw validation_error("run: no observations");
    }
    for (std::size_t i = 1; i < observations.size(); ++i) {
        if (observations[i].bucket_id == observations[i - 1].bucket_id) {
            throw validation_error("run: duplicate bucket_id '" + observations[i].bucket_id + "'");
        }
        if (observations[i].bucket_id < observations[i - 1].bucket_id) {
            throw validation_error("run: observations not sorted by bucket_id ('" +
                                   observations[i].bucket_id + "' after '" +
                                   observations[i - 1].bucket_id + "')");
        }
    }

    std::vector<MeasureKind> unique_kinds;
    for (MeasureKind kind : kinds) {
        bool known = false;
        for (MeasureKind u : unique_kinds) known = known || u == kind;
        if (!known) unique_kinds.push_back(kind);
    }

    std::vector<BucketResult> results;
    results.reserve(observations.size());
    for (std::size_t ordinal = 0; ordinal < observations.size(); ++ordinal) {
        const auto& obs = observations[ordinal];
        const DirichletParams bucket_prior =
            (policy.mode == PriorMode::Sequential && ordinal > 0) ? results.back().posterior
                                                                  : policy.base_prior;
        DirichletParams posterior = posterior_update(bucket_prior, obs.counts);

        std::map<MeasureKind, MeasureSummary> summaries;
        if (!unique_kinds.empty()) {
            const SampleBatch batch = draw(posterior, n_draws, mix_seed(seed, ordinal));
            for (MeasureKind kind : unique_kinds) {
                summaries.emplace(kind, summarize(kind, batch, ci_mass, bins));
            }
        }
        results.push_back({obs.bucket_id, bucket_prior, obs.counts, std::move(posterior),
                           std::move(summaries)});
    }
    return results;
}

}  // namespace sentibayes
