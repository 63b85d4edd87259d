#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "error.hpp"
#include "specfun.hpp"

namespace sentibayes {

// Validity floor for shape parameters; permits fractional priors while
// excluding degenerate zeros.
inline constexpr double kMinShape = 1e-12;

// |sum(theta) - 1| allowance for points on the probability simplex.
inline constexpr double kSimplexTol = 1e-12;

inline std::vector<std::string> default_category_labels(std::size_t k) {
    if (k == 3) return {"negative", "neutral", "positive"};
    std::vector<std::string> labels;
    labels.reserve(k);
    for (std::size_t i = 0; i < k; ++i) labels.push_back("cat" + std::to_string(i + 1));
    return labels;
}

// Dirichlet shape vector over K >= 2 sentiment categories. Immutable value;
// holds both priors and posteriors.
class DirichletParams {
public:
    explicit DirichletParams(std::vector<double> alpha, std::vector<std::string> labels = {})
        : alpha_(std::move(alpha)), labels_(std::move(labels)) {
        if (alpha_.size() < 2) {
            throw validation_error("DirichletParams: need at least two categories");
        }
        for (double a : alpha_) {
            if (!std::isfinite(a) || a < kMinShape) {
                throw validation_error(
                    "DirichletParams: every shape parameter must be > 0 (floor 1e-12), got " +
                    std::to_string(a));
            }
        }
        if (labels_.empty()) {
            labels_ = default_category_labels(alpha_.size());
        } else if (labels_.size() != alpha_.size()) {
            throw validation_error("DirichletParams: label count does not match dimension");
        }
        std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
        if (seen.size() != labels_.size()) {
            throw validation_error("DirichletParams: category labels must be unique");
        }
    }

    const std::vector<double>& alpha() const noexcept { return alpha_; }
    const std::vector<std::string>& category_labels() const noexcept { return labels_; }
    std::size_t dimension() const noexcept { return alpha_.size(); }

    // alpha_0, the concentration total
    double total() const noexcept {
        double sum = 0.0;
        for (double a : alpha_) sum += a;
        return sum;
    }

    bool operator==(const DirichletParams&) const = default;

private:
    std::vector<double> alpha_;
    std::vector<std::string> labels_;
};

// Observed sentiment counts for one sample window.
class SentimentCounts {
public:
    explicit SentimentCounts(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
        if (counts_.size() < 2) {
            throw validation_error("SentimentCounts: need at least two categories");
        }
        for (std::int64_t x : counts_) {
            if (x < 0) {
                throw validation_error("SentimentCounts: counts must be non-negative, got " +
                                       std::to_string(x));
            }
        }
    }

    const std::vector<std::int64_t>& counts() const noexcept { return counts_; }
    std::size_t dimension() const noexcept { return counts_.size(); }

    // n, the window total
    std::int64_t total() const noexcept {
        std::int64_t sum = 0;
        for (std::int64_t x : counts_) sum += x;
        return sum;
    }

    bool operator==(const SentimentCounts&) const = default;

private:
    std::vector<std::int64_t> counts_;
};

// One point on the probability simplex.
class ProbVector {
public:
    explicit ProbVector(std::vector<double> theta) : theta_(std::move(theta)) {
        if (theta_.size() < 2) {
            throw validation_error("ProbVector: need at least two categories");
        }
        double sum = 0.0;
        for (double t : theta_) {
            if (!(t >= 0.0 && t <= 1.0)) {
                throw validation_error("ProbVector: components must lie in [0, 1]");
            }
            sum += t;
        }
        if (std::fabs(sum - 1.0) > kSimplexTol) {
            throw validation_error("ProbVector: components must sum to 1, got " +
                                   std::to_string(sum));
        }
    }

    const std::vector<double>& theta() const noexcept { return theta_; }
    double operator[](std::size_t i) const noexcept { return theta_[i]; }
    std::size_t dimension() const noexcept { return theta_.size(); }

    bool operator==(const ProbVector&) const = default;

private:
    std::vector<double> theta_;
};

namespace detail {

inline void require_same_dimension(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw validation_error(std::string(what) + ": dimension mismatch (" +
                               std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace detail

// Conjugate update: Dir(alpha) + counts x -> Dir(alpha + x). Keeps the
// prior's category labels. Integer-valued shapes stay exact.
inline DirichletParams posterior_update(const DirichletParams& prior, const SentimentCounts& obs) {
    detail::require_same_dimension(prior.dimension(), obs.dimension(), "posterior_update");
    std::vector<double> alpha = prior.alpha();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        alpha[i] += static_cast<double>(obs.counts()[i]);
    }
    return DirichletParams(std::move(alpha), prior.category_labels());
}

// Log Dirichlet density at a simplex point. Boundary points yield signed
// infinities instead of throwing: with zero components the sign follows the
// net exponent s = sum over those components of (alpha_i - 1) (the limit
// along theta_i = eps); s < 0 -> +inf, s > 0 -> -inf, s = 0 -> finite.
inline double log_density(const DirichletParams& params, const ProbVector& point) {
    detail::require_same_dimension(params.dimension(), point.dimension(), "log_density");
    const auto& alpha = params.alpha();
    double acc = -log_beta(std::span<const double>(alpha));
    double boundary_exponent = 0.0;
    bool on_boundary = false;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (point[i] == 0.0) {
            on_boundary = true;
            boundary_exponent += alpha[i] - 1.0;
        } else {
            acc += (alpha[i] - 1.0) * std::log(point[i]);
        }
    }
    if (on_boundary && boundary_exponent != 0.0) {
        return boundary_exponent < 0.0 ? std::numeric_limits<double>::infinity()
                                       : -std::numeric_limits<double>::infinity();
    }
    return acc;
}

// Log multinomial likelihood of counts x at a simplex point.
// Returns -inf when some theta_i = 0 has x_i > 0.
inline double log_likelihood(const SentimentCounts& obs, const ProbVector& point) {
    detail::require_same_dimension(obs.dimension(), point.dimension(), "log_likelihood");
    const auto& x = obs.counts();
    double acc = log_gamma(static_cast<double>(obs.total()) + 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc -= log_gamma(static_cast<double>(x[i]) + 1.0);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        if (point[i] == 0.0) return -std::numeric_limits<double>::infinity();
        acc += static_cast<double>(x[i]) * std::log(point[i]);
    }
    return acc;
}

// Log model evidence p(X): the Dirichlet-multinomial compound
// log[ Gamma(n+1)/prod Gamma(x_i+1) ] + log B(alpha + x) - log B(alpha).
inline double log_evidence(const DirichletParams& prior, const SentimentCounts& obs) {
    detail::require_same_dimension(prior.dimension(), obs.dimension(), "log_evidence");
    const auto& alpha = prior.alpha();
    const auto& x = obs.counts();
    double acc = log_gamma(static_cast<double>(obs.total()) + 1.0);
    std::vector<double> updated(alpha.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc -= log_gamma(static_cast<double>(x[i]) + 1.0);
        updated[i] = alpha[i] + static_cast<double>(x[i]);
    }
    return acc + log_beta(std::span<const double>(updated)) -
           log_beta(std::span<const double>(alpha));
}

// Posterior mean (alpha_i / alpha_0, ...).
inline ProbVector mean(const DirichletParams& params) {
    const double total = params.total();
    std::vector<double> m(params.dimension());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = params.alpha()[i] / total;
    return ProbVector(std::move(m));
}

// Beta(alpha_i, alpha_0 - alpha_i) parameters of component i's marginal.
inline std::pair<double, double> marginal_beta(const DirichletParams& params, std::size_t index) {
    if (index >= params.dimension()) {
        throw validation_error("marginal_beta: category index out of range");
    }
    const double a = params.alpha()[index];
    return {a, params.total() - a};
}

}  // namespace sentibayes
