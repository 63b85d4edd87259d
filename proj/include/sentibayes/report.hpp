#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pipeline.hpp"

// Report emission: machine CSV/JSON with round-trip-exact numbers, human
// tables at 4 decimals, and dependency-free SVG plots.

namespace sentibayes {

// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Fixed-decimals form for human-facing tables.
inline std::string format_fixed(double v, int decimals = 4) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline void write_run_report_csv(std::ostream& out, const std::vector<BucketResult>& results,
                                 const std::vector<MeasureKind>& kinds) {
    out << "bucket,prior_negative,prior_neutral,prior_positive"
        << ",count_negative,count_neutral,count_positive"
        << ",post_negative,post_neutral,post_positive";
    for (MeasureKind kind : kinds) {
        const auto code = measure_code(kind);
        out << ',' << code << "_mean," << code << "_median," << code << "_ci_low," << code
            << "_ci_high," << code << "_unstable";
    }
    out << '\n';
    for (const auto& result : results) {
        out << result.bucket_id;
        for (double a : result.prior.alpha()) out << ',' << format_double(a);
        for (std::int64_t c : result.counts.counts()) out << ',' << c;
        for (double a : result.posterior.alpha()) out << ',' << format_double(a);
        for (MeasureKind kind : kinds) {
            const auto& s = result.summaries.at(kind);
            out << ',' << format_double(s.mean) << ',' << format_double(s.median) << ','
                << format_double(s.ci_low) << ',' << format_double(s.ci_high) << ','
                << (s.unstable_mean ? "true" : "false");
        }
        out << '\n';
    }
}

inline nlohmann::ordered_json run_report_json(const std::vector<BucketResult>& results,
                                              const std::vector<MeasureKind>& kinds) {
    nlohmann::ordered_json report = nlohmann::ordered_json::array();
    for (const auto& result : results) {
        nlohmann::ordered_json row;
        row["bucket"] = result.bucket_id;
        row["prior"] = result.prior.alpha();
        row["counts"] = result.counts.counts();
        row["posterior"] = result.posterior.alpha();
        nlohmann::ordered_json measures;
        for (MeasureKind kind : kinds) {
            const auto& s = result.summaries.at(kind);
            measures[std::string(measure_code(kind))] = {{"mean", s.mean},
                                                         {"median", s.median},
                                                         {"ci_low", s.ci_low},
                                                         {"ci_high", s.ci_high},
                                                         {"ci_mass", s.ci_mass},
                                                         {"unstable_mean", s.unstable_mean}};
        }
        row["measures"] = std::move(measures);
        report.push_back(std::move(row));
    }
    return report;
}

// Human-facing histogram bin table plus a summary line, 4 decimals.
inline void write_hist_table(std::ostream& out, const MeasureSummary& summary) {
    out << "bin_lower,bin_upper,count\n";
    for (const auto& bin : summary.histogram) {
        out << format_fixed(bin.lower) << ',' << format_fixed(bin.upper) << ',' << bin.count
            << '\n';
    }
    out << "measure=" << measure_code(summary.kind) << " mean=" << format_fixed(summary.mean)
        << " median=" << format_fixed(summary.median) << " ci" << format_fixed(summary.ci_mass * 100.0, 0)
        << "=[" << format_fixed(summary.ci_low) << ", " << format_fixed(summary.ci_high) << "]"
        << " skewness=" << format_fixed(summary.skewness)
        << " unstable_mean=" << (summary.unstable_mean ? "true" : "false") << '\n';
}

namespace detail {

inline std::string svg_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct LinearScale {
    double domain_lo, domain_hi, range_lo, range_hi;

    double operator()(double v) const {
        return range_lo + (v - domain_lo) / (domain_hi - domain_lo) * (range_hi - range_lo);
    }
};

inline void svg_open(std::ostream& out, int width, int height, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "  <title>" << title << "</title>\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
}

inline void svg_axes(std::ostream& out, double left, double top, double right, double bottom) {
    out << "  <line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(bottom) << "\" x2=\""
        << svg_num(right) << "\" y2=\"" << svg_num(bottom)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "  <line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(top) << "\" x2=\""
        << svg_num(left) << "\" y2=\"" << svg_num(bottom)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
}

}  // namespace detail

// Per-bucket plot of one measure: square markers at Monte Carlo means,
// vertical bars spanning the credible interval, buckets on the x axis.
inline void write_run_svg(std::ostream& out, const std::vector<BucketResult>& results,
                          MeasureKind kind) {
    constexpr int kWidth = 720;
    constexpr int kHeight = 480;
    constexpr double kLeft = 70.0, kRight = 700.0, kTop = 40.0, kBottom = 410.0;

    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (const auto& result : results) {
        const auto& s = result.summaries.at(kind);
        lo = first ? std::min(0.0, s.ci_low) : std::min(lo, s.ci_low);
        hi = first ? s.ci_high : std::max(hi, s.ci_high);
        first = false;
    }
    if (!(hi > lo)) hi = lo + 1.0;
    hi += 0.05 * (hi - lo);
    const detail::LinearScale y{lo, hi, kBottom, kTop};

    detail::svg_open(out, kWidth, kHeight, std::string(measure_name(kind)));
    out << "  <text x=\"" << detail::svg_num((kLeft + kRight) / 2.0)
        << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << measure_name(kind)
        << " (mean and " << format_fixed(results.front().summaries.at(kind).ci_mass * 100.0, 0)
        << "% credible interval)</text>\n";
    detail::svg_axes(out, kLeft, kTop, kRight, kBottom);

    for (int tick = 0; tick <= 5; ++tick) {
        const double v = lo + (hi - lo) * tick / 5.0;
        const double ty = y(v);
        out << "  <line x1=\"" << detail::svg_num(kLeft - 4) << "\" y1=\"" << detail::svg_num(ty)
            << "\" x2=\"" << detail::svg_num(kLeft) << "\" y2=\"" << detail::svg_num(ty)
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out << "  <text x=\"" << detail::svg_num(kLeft - 8) << "\" y=\"" << detail::svg_num(ty + 4)
            << "\" text-anchor=\"end\">" << format_fixed(v, 3) << "</text>\n";
    }

    const double slot = (kRight - kLeft) / static_cast<double>(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& s = results[i].summaries.at(kind);
        const double cx = kLeft + (static_cast<double>(i) + 0.5) * slot;
        out << "  <line class=\"ci-bar\" x1=\"" << detail::svg_num(cx) << "\" y1=\""
            << detail::svg_num(y(s.ci_low)) << "\" x2=\"" << detail::svg_num(cx) << "\" y2=\""
            << detail::svg_num(y(s.ci_high)) << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
        out << "  <rect class=\"mean-marker\" x=\"" << detail::svg_num(cx - 3.5) << "\" y=\""
            << detail::svg_num(y(s.mean) - 3.5)
            << "\" width=\"7\" height=\"7\" fill=\"#d62728\"/>\n";
        out << "  <text x=\"" << detail::svg_num(cx) << "\" y=\"" << detail::svg_num(kBottom + 12)
            << "\" text-anchor=\"end\" transform=\"rotate(-45 " << detail::svg_num(cx) << ' '
            << detail::svg_num(kBottom + 12) << ")\">" << results[i].bucket_id << "</text>\n";
    }
    out << "</svg>\n";
}

// Histogram bar chart of one summary.
inline void write_hist_svg(std::ostream& out, const MeasureSummary& summary) {
    constexpr int kWidth = 720;
    constexpr int kHeight = 480;
    constexpr double kLeft = 70.0, kRight = 700.0, kTop = 40.0, kBottom = 420.0;

    std::size_t max_count = 1;
    for (const auto& bin : summary.histogram) max_count = std::max(max_count, bin.count);
    const detail::LinearScale y{0.0, static_cast<double>(max_count) * 1.05, kBottom, kTop};

    detail::svg_open(out, kWidth, kHeight, std::string(measure_name(summary.kind)));
    out << "  <text x=\"" << detail::svg_num((kLeft + kRight) / 2.0)
        << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << measure_name(summary.kind)
        << " histogram</text>\n";
    detail::svg_axes(out, kLeft, kTop, kRight, kBottom);

    const double slot = (kRight - kLeft) / static_cast<double>(summary.histogram.size());
    for (std::size_t i = 0; i < summary.histogram.size(); ++i) {
        const auto& bin = summary.histogram[i];
        const double x0 = kLeft + slot * static_cast<double>(i);
        const double top = y(static_cast<double>(bin.count));
        out << "  <rect class=\"hist-bar\" x=\"" << detail::svg_num(x0 + 0.5) << "\" y=\""
            << detail::svg_num(top) << "\" width=\"" << detail::svg_num(slot - 1.0)
            << "\" height=\"" << detail::svg_num(kBottom - top)
            << "\" fill=\"#1f77b4\"/>\n";
    }
    // a few x labels: lower edges at both ends plus the midpoint
    const auto label_at = [&](std::size_t i) {
        const double x0 = kLeft + slot * static_cast<double>(i);
        const double v = summary.histogram[i].lower;
        out << "  <text x=\"" << detail::svg_num(x0) << "\" y=\"" << detail::svg_num(kBottom + 16)
            << "\" text-anchor=\"middle\">" << format_fixed(v, 3) << "</text>\n";
    };
    label_at(0);
    label_at(summary.histogram.size() / 2);
    label_at(summary.histogram.size() - 1);
    out << "</svg>\n";
}

}  // namespace sentibayes
