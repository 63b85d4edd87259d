#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "dirichlet.hpp"
#include "rng.hpp"

namespace sentibayes {

// One seeded Monte Carlo batch of simplex points.
struct SampleBatch {
    DirichletParams source_params;
    std::uint64_t seed = 0;
    std::vector<ProbVector> draws;

    std::size_t n_draws() const noexcept { return draws.size(); }
};

// Samples n_draws probability vectors from Dir(params): K independent
// Gamma(alpha_i, 1) variates normalized onto the simplex. The batch is a
// pure function of (params, n_draws, seed).
inline SampleBatch draw(const DirichletParams& params, std::size_t n_draws, std::uint64_t seed) {
    if (n_draws == 0) {
        throw validation_error("draw: n_draws must be at least 1");
    }
    Xoshiro256pp rng(seed);
    SampleBatch batch{params, seed, {}};
    batch.draws.reserve(n_draws);
    const auto& alpha = params.alpha();
    const std::size_t k = alpha.size();
    std::vector<double> gammas(k);
    for (std::size_t d = 0; d < n_draws; ++d) {
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            gammas[i] = gamma_variate(rng, alpha[i]);
            total += gammas[i];
        }
        std::vector<double> theta(k);
        for (std::size_t i = 0; i < k; ++i) theta[i] = gammas[i] / total;
        batch.draws.emplace_back(std::move(theta));
    }
    return batch;
}

// The index-th component of every draw, order preserved.
inline std::vector<double> component_samples(const SampleBatch& batch, std::size_t index) {
    if (index >= batch.source_params.dimension()) {
        throw validation_error("component_samples: category index out of range");
    }
    std::vector<double> out;
    out.reserve(batch.draws.size());
    for (const auto& point : batch.draws) out.push_back(point[index]);
    return out;
}

}  // namespace sentibayes
