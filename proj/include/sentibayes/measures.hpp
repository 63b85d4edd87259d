#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "sampler.hpp"
#include "specfun.hpp"

// The public sentiment measure catalog: scalar aggregations of the
// (negative, neutral, positive) probability vector, plus Monte Carlo
// summaries with credible intervals.

namespace sentibayes {

enum class MeasureKind {
    NetSentiment,
    ScaledNetSentiment,
    PositiveSentimentProbability,
    NegativeSentimentProbability,
    PositiveToPolarityRatio,
    PositiveToNegativeRatio,
};

inline constexpr MeasureKind kAllMeasures[] = {
    MeasureKind::NetSentiment,
    MeasureKind::ScaledNetSentiment,
    MeasureKind::PositiveSentimentProbability,
    MeasureKind::NegativeSentimentProbability,
    MeasureKind::PositiveToPolarityRatio,
    MeasureKind::PositiveToNegativeRatio,
};

struct MeasureBounds {
    double lower;
    double upper;  // +inf for the positive-to-negative ratio
};

inline MeasureBounds bounds_of(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::NetSentiment: return {-1.0, 1.0};
        case MeasureKind::ScaledNetSentiment: return {0.0, 100.0};
        case MeasureKind::PositiveSentimentProbability: return {0.0, 1.0};
        case MeasureKind::NegativeSentimentProbability: return {0.0, 1.0};
        case MeasureKind::PositiveToPolarityRatio: return {0.0, 1.0};
        case MeasureKind::PositiveToNegativeRatio:
            return {0.0, std::numeric_limits<double>::infinity()};
    }
    throw validation_error("bounds_of: unknown measure kind");
}

// Short codes used in report columns and on the command line.
inline std::string_view measure_code(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::NetSentiment: return "net";
        case MeasureKind::ScaledNetSentiment: return "snet";
        case MeasureKind::PositiveSentimentProbability: return "psp";
        case MeasureKind::NegativeSentimentProbability: return "nsp";
        case MeasureKind::PositiveToPolarityRatio: return "p2p";
        case MeasureKind::PositiveToNegativeRatio: return "p2n";
    }
    throw validation_error("measure_code: unknown measure kind");
}

inline std::string_view measure_name(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::NetSentiment: return "net sentiment";
        case MeasureKind::ScaledNetSentiment: return "scaled net sentiment";
        case MeasureKind::PositiveSentimentProbability: return "positive sentiment probability";
        case MeasureKind::NegativeSentimentProbability: return "negative sentiment probability";
        case MeasureKind::PositiveToPolarityRatio: return "positive to polarity ratio";
        case MeasureKind::PositiveToNegativeRatio: return "positive to negative ratio";
    }
    throw validation_error("measure_name: unknown measure kind");
}

inline MeasureKind measure_from_code(std::string_view code) {
    for (MeasureKind kind : kAllMeasures) {
        if (measure_code(kind) == code) return kind;
    }
    throw validation_error("unknown measure code '" + std::string(code) +
                           "' (expected one of: net, snet, psp, nsp, p2p, p2n)");
}

// Evaluates one measure at a simplex point. Requires K = 3 with category
// order (negative, neutral, positive). The positive-to-negative ratio is
// +inf when theta_1 = 0 (and theta_3 > 0); ratios with zero denominator and
// zero numerator are NaN (undefined-value indicator).
inline double evaluate(MeasureKind kind, const ProbVector& point) {
    if (point.dimension() != 3) {
        throw validation_error("evaluate: measures are defined for K = 3 categories, got K = " +
                               std::to_string(point.dimension()));
    }
    const double neg = point[0];
    const double pos = point[2];
    switch (kind) {
        case MeasureKind::NetSentiment:
            return pos - neg;
        case MeasureKind::ScaledNetSentiment:
            return 100.0 * ((pos - neg) / 2.0 + 0.5);
        case MeasureKind::PositiveSentimentProbability:
            return pos;
        case MeasureKind::NegativeSentimentProbability:
            return neg;
        case MeasureKind::PositiveToPolarityRatio: {
            const double polarity = neg + pos;
            if (polarity == 0.0) return std::numeric_limits<double>::quiet_NaN();
            return pos / polarity;
        }
        case MeasureKind::PositiveToNegativeRatio: {
            if (neg == 0.0) {
                return pos == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                  : std::numeric_limits<double>::infinity();
            }
            return pos / neg;
        }
    }
    throw validation_error("evaluate: unknown measure kind");
}

struct HistogramBin {
    double lower;
    double upper;
    std::size_t count;
};

struct MeasureSummary {
    MeasureKind kind;
    double mean;
    double median;
    double ci_low;
    double ci_high;
    double ci_mass;
    std::vector<HistogramBin> histogram;
    double skewness;
    bool unstable_mean;
};

// Empirical quantile with linear interpolation between order statistics
// (h = (n-1)p); values must be sorted ascending.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) {
        throw validation_error("quantile_sorted: no values");
    }
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace detail {

inline std::vector<HistogramBin> build_histogram(MeasureKind kind,
                                                 const std::vector<double>& sorted_finite,
                                                 std::size_t bins) {
    const MeasureBounds bounds = bounds_of(kind);
    const double lo = bounds.lower;
    double hi = bounds.upper;
    const bool unbounded = !std::isfinite(hi);
    if (unbounded) {
        hi = quantile_sorted(sorted_finite, 0.99);
        if (!(hi > lo)) hi = lo + 1.0;  // degenerate batch pinned at the lower bound
    }
    const double width = (hi - lo) / static_cast<double>(bins);

    std::vector<HistogramBin> hist;
    hist.reserve(bins + (unbounded ? 1 : 0));
    for (std::size_t i = 0; i < bins; ++i) {
        hist.push_back({lo + width * static_cast<double>(i),
                        lo + width * static_cast<double>(i + 1), 0});
    }
    hist[bins - 1].upper = hi;  // close the last regular bin exactly
    if (unbounded) {
        hist.push_back({hi, std::numeric_limits<double>::infinity(), 0});
    }

    for (double v : sorted_finite) {
        std::size_t idx;
        if (unbounded && v > hi) {
            idx = bins;  // overflow bin
        } else {
            idx = static_cast<std::size_t>((v - lo) / width);
            if (idx >= bins) idx = bins - 1;
        }
        ++hist[idx].count;
    }
    return hist;
}

}  // namespace detail

// Monte Carlo summary of one measure over a sample batch: mean over finite
// values, equal-tailed credible interval from empirical quantiles,
// histogram over the declared bounds (unbounded kind: over [0, empirical
// 99th percentile] with an overflow bin appended), and sample skewness via
// the standardized third central moment. The mean is flagged unstable when
// any non-finite value occurred or the kind is the positive-to-negative
// ratio, whose posterior mean diverges for small negative-shape parameters.
inline MeasureSummary summarize(MeasureKind kind, const SampleBatch& batch, double ci_mass = 0.95,
                                std::size_t bins = 50) {
    if (batch.draws.empty()) {
        throw validation_error("summarize: batch is empty");
    }
    if (!(ci_mass > 0.0 && ci_mass < 1.0)) {
        throw validation_error("summarize: ci_mass must lie strictly between 0 and 1");
    }
    if (bins == 0) {
        throw validation_error("summarize: need at least one histogram bin");
    }

    std::vector<double> finite;
    finite.reserve(batch.draws.size());
    bool saw_nonfinite = false;
    for (const auto& point : batch.draws) {
        const double v = evaluate(kind, point);
        if (std::isfinite(v)) {
            finite.push_back(v);
        } else {
            saw_nonfinite = true;
        }
    }
    if (finite.empty()) {
        throw validation_error("summarize: summary unavailable, no finite measure values");
    }
    std::sort(finite.begin(), finite.end());

    // a constant sample has zero central moments exactly; summation rounding
    // must not fabricate nonzero ones
    const bool constant = finite.front() == finite.back();
    const double n = static_cast<double>(finite.size());
    double mean_value = finite.front();
    if (!constant) {
        mean_value = 0.0;
        for (double v : finite) mean_value += v;
        mean_value /= n;
    }

    double m2 = 0.0;
    double m3 = 0.0;
    if (!constant) {
        for (double v : finite) {
            const double d = v - mean_value;
            m2 += d * d;
            m3 += d * d * d;
        }
        m2 /= n;
        m3 /= n;
    }
    const double skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;

    const double tail = (1.0 - ci_mass) / 2.0;
    MeasureSummary summary{
        kind,
        mean_value,
        quantile_sorted(finite, 0.5),
        quantile_sorted(finite, tail),
        quantile_sorted(finite, 1.0 - tail),
        ci_mass,
        detail::build_histogram(kind, finite, bins),
        skewness,
        saw_nonfinite || kind == MeasureKind::PositiveToNegativeRatio,
    };
    return summary;
}

// Analytic equal-tailed interval for one component's Beta marginal; the
// closed-form cross-check for the Monte Carlo interval.
inline std::pair<double, double> credible_interval_beta(const DirichletParams& params,
                                                        std::size_t index, double ci_mass) {
    if (!(ci_mass > 0.0 && ci_mass < 1.0)) {
        throw validation_error("credible_interval_beta: ci_mass must lie strictly between 0 and 1");
    }
    const auto [a, b] = marginal_beta(params, index);
    const double tail = (1.0 - ci_mass) / 2.0;
    return {beta_quantile(a, b, tail), beta_quantile(a, b, 1.0 - tail)};
}

}  // namespace sentibayes
