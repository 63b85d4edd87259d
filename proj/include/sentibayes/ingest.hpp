#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <climits>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pipeline.hpp"

// Parsers for the supported raw inputs: pre-aggregated count tables (CSV or
// JSONL), per-record labeled data, and raw text routed through a pluggable
// lexicon classifier.

namespace sentibayes {

enum class SentimentLabel { Negative = 0, Neutral = 1, Positive = 2 };

inline std::string_view label_name(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::Negative: return "negative";
        case SentimentLabel::Neutral: return "neutral";
        case SentimentLabel::Positive: return "positive";
    }
    throw validation_error("label_name: unknown label");
}

struct LabeledRecord {
    std::string bucket_id;
    SentimentLabel label = SentimentLabel::Neutral;
    std::int64_t weight = 1;
};

enum class TableFormat { Csv, Jsonl };

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// Physical lines with CRLF tolerated and a leading UTF-8 BOM skipped.
inline std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lines.empty() && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        lines.push_back(line);
    }
    if (in.bad()) {
        throw io_error("failed reading input stream");
    }
    return lines;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

inline std::int64_t parse_int(std::string_view field, std::size_t line_no, const char* what) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw parse_error(line_no, std::string("malformed ") + what + " '" + std::string(field) + "'");
    }
    return value;
}

inline bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    const int year = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
    const int month = (s[5] - '0') * 10 + (s[6] - '0');
    const int day = (s[8] - '0') * 10 + (s[9] - '0');
    if (month < 1 || month > 12 || day < 1) return false;
    static constexpr int days_in[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int limit = days_in[month - 1];
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) limit = 29;
    return day <= limit;
}

// Bucket ids are either all ISO-8601 calendar dates or all opaque labels;
// mixing the two within one file has no single ordering semantics.
class BucketIdStyle {
public:
    void observe(std::string_view bucket, std::size_t line_no) {
        const bool iso = is_iso_date(bucket);
        if (!seen_) {
            seen_ = true;
            iso_ = iso;
        } else if (iso != iso_) {
            throw parse_error(line_no, "bucket ids mix ISO-8601 dates and opaque labels ('" +
                                           std::string(bucket) + "')");
        }
    }

private:
    bool seen_ = false;
    bool iso_ = false;
};

inline nlohmann::json parse_json_line(const std::string& line, std::size_t line_no) {
    try {
        return nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(line_no, std::string("invalid JSON: ") + e.what());
    }
}

inline std::int64_t json_count(const nlohmann::json& obj, const char* key, std::size_t line_no) {
    if (!obj.contains(key) || !obj[key].is_number_integer()) {
        throw parse_error(line_no, std::string("missing or non-integer '") + key + "' field");
    }
    return obj[key].get<std::int64_t>();
}

inline std::string json_string(const nlohmann::json& obj, const char* key, std::size_t line_no) {
    if (!obj.contains(key) || !obj[key].is_string()) {
        throw parse_error(line_no, std::string("missing or non-string '") + key + "' field");
    }
    return obj[key].get<std::string>();
}

}  // namespace detail

inline SentimentLabel label_from_string(std::string_view s) {
    std::string folded(s);
    for (char& c : folded) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (folded == "negative") return SentimentLabel::Negative;
    if (folded == "neutral") return SentimentLabel::Neutral;
    if (folded == "positive") return SentimentLabel::Positive;
    throw validation_error("unknown sentiment label '" + std::string(s) +
                           "' (expected negative, neutral, or positive)");
}

inline constexpr std::string_view kCountsCsvHeader = "bucket,negative,neutral,positive";

// Parses a pre-aggregated counts table into observations sorted by
// bucket_id. CSV wants the exact header `bucket,negative,neutral,positive`;
// JSONL wants one object per line with the same keys. Errors carry 1-based
// line numbers; duplicate buckets and negative counts are rejected.
inline std::vector<BucketObservation> parse_counts_table(std::istream& in, TableFormat format) {
    const std::vector<std::string> lines = detail::read_lines(in);

    std::vector<BucketObservation> observations;
    std::map<std::string, std::size_t> first_line;
    detail::BucketIdStyle style;

    auto add_row = [&](std::string bucket, std::int64_t neg, std::int64_t neu, std::int64_t pos,
                       std::size_t line_no) {
        if (bucket.empty()) {
            throw parse_error(line_no, "empty bucket id");
        }
        if (neg < 0 || neu < 0 || pos < 0) {
            throw parse_error(line_no, "negative count for bucket '" + bucket + "'");
        }
        const auto [it, inserted] = first_line.emplace(bucket, line_no);
        if (!inserted) {
            throw parse_error(line_no, "duplicate bucket_id '" + bucket + "' (first seen on line " +
                                           std::to_string(it->second) + ")");
        }
        style.observe(bucket, line_no);
        observations.push_back({std::move(bucket), SentimentCounts({neg, neu, pos})});
    };

    if (format == TableFormat::Csv) {
        if (lines.empty() || detail::trim(lines[0]) != kCountsCsvHeader) {
            throw parse_error(1, "expected header '" + std::string(kCountsCsvHeader) + "'");
        }
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const std::size_t line_no = i + 1;
            if (detail::trim(lines[i]).empty()) continue;
            const auto fields = detail::split_csv(lines[i]);
            if (fields.size() != 4) {
                throw parse_error(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
            }
            add_row(std::string(fields[0]), detail::parse_int(fields[1], line_no, "negative count"),
                    detail::parse_int(fields[2], line_no, "neutral count"),
                    detail::parse_int(fields[3], line_no, "positive count"), line_no);
        }
    } else {
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::size_t line_no = i + 1;
            if (detail::trim(lines[i]).empty()) continue;
            const nlohmann::json obj = detail::parse_json_line(lines[i], line_no);
            if (!obj.is_object()) {
                throw parse_error(line_no, "expected a JSON object");
            }
            add_row(detail::json_string(obj, "bucket", line_no),
                    detail::json_count(obj, "negative", line_no),
                    detail::json_count(obj, "neutral", line_no),
                    detail::json_count(obj, "positive", line_no), line_no);
        }
    }

    if (observations.empty()) {
        throw validation_error("empty input: no data rows");
    }
    std::sort(observations.begin(), observations.end(),
              [](const BucketObservation& a, const BucketObservation& b) {
                  return a.bucket_id < b.bucket_id;
              });
    return observations;
}

// Canonical serialization of a counts table; the inverse of
// parse_counts_table for valid inputs.
inline void write_counts_csv(std::ostream& out, const std::vector<BucketObservation>& observations) {
    out << kCountsCsvHeader << '\n';
    for (const auto& obs : observations) {
        const auto& c = obs.counts.counts();
        out << obs.bucket_id << ',' << c[0] << ',' << c[1] << ',' << c[2] << '\n';
    }
}

// Parses per-record labeled data: CSV header `bucket,label` or
// `bucket,label,weight`, or JSONL with those keys. Labels are
// case-insensitive; weights are positive integers defaulting to 1.
inline std::vector<LabeledRecord> parse_records_table(std::istream& in, TableFormat format) {
    const std::vector<std::string> lines = detail::read_lines(in);

    std::vector<LabeledRecord> records;
    detail::BucketIdStyle style;

    auto add_record = [&](std::string bucket, std::string_view label, std::int64_t weight,
                          std::size_t line_no) {
        if (bucket.empty()) {
            throw parse_error(line_no, "empty bucket id");
        }
        if (weight <= 0) {
            throw parse_error(line_no, "weight must be a positive integer");
        }
        style.observe(bucket, line_no);
        SentimentLabel parsed;
        try {
            parsed = label_from_string(label);
        } catch (const validation_error& e) {
            throw parse_error(line_no, e.what());
        }
        records.push_back({std::move(bucket), parsed, weight});
    };

    if (format == TableFormat::Csv) {
        if (lines.empty()) {
            throw parse_error(1, "expected header 'bucket,label' or 'bucket,label,weight'");
        }
        const auto header = detail::split_csv(lines[0]);
        bool has_weight = false;
        if (header.size() == 3 && header[0] == "bucket" && header[1] == "label" &&
            header[2] == "weight") {
            has_weight = true;
        } else if (!(header.size() == 2 && header[0] == "bucket" && header[1] == "label")) {
            throw parse_error(1, "expected header 'bucket,label' or 'bucket,label,weight'");
        }
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const std::size_t line_no = i + 1;
            if (detail::trim(lines[i]).empty()) continue;
            const auto fields = detail::split_csv(lines[i]);
            const std::size_t expected = has_weight ? 3 : 2;
            if (fields.size() != expected) {
                throw parse_error(line_no, "expected " + std::to_string(expected) +
                                               " fields, got " + std::to_string(fields.size()));
            }
            const std::int64_t weight =
                has_weight ? detail::parse_int(fields[2], line_no, "weight") : 1;
            add_record(std::string(fields[0]), fields[1], weight, line_no);
        }
    } else {
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::size_t line_no = i + 1;
            if (detail::trim(lines[i]).empty()) continue;
            const nlohmann::json obj = detail::parse_json_line(lines[i], line_no);
            if (!obj.is_object()) {
                throw parse_error(line_no, "expected a JSON object");
            }
            std::int64_t weight = 1;
            if (obj.contains("weight")) {
                if (!obj["weight"].is_number_integer()) {
                    throw parse_error(line_no, "non-integer 'weight' field");
                }
                weight = obj["weight"].get<std::int64_t>();
            }
            add_record(detail::json_string(obj, "bucket", line_no),
                       detail::json_string(obj, "label", line_no), weight, line_no);
        }
    }
    return records;
}

// Sums per-bucket label weights into count observations, sorted by bucket.
// Order-independent in the input records; empty input yields empty output.
inline std::vector<BucketObservation> aggregate_records(const std::vector<LabeledRecord>& records) {
    std::map<std::string, std::array<std::int64_t, 3>> totals;
    for (const auto& record : records) {
        auto& row = totals.try_emplace(record.bucket_id, std::array<std::int64_t, 3>{0, 0, 0})
                        .first->second;
        row[static_cast<std::size_t>(record.label)] += record.weight;
    }
    std::vector<BucketObservation> observations;
    observations.reserve(totals.size());
    for (auto& [bucket, row] : totals) {
        observations.push_back({bucket, SentimentCounts({row[0], row[1], row[2]})});
    }
    return observations;
}

// Term/emoticon score table. Deliberately tiny and illustrative: terms are
// matched after whitespace/punctuation tokenization and lowercasing,
// emoticons against raw whitespace-separated tokens.
struct Lexicon {
    std::map<std::string, int, std::less<>> term_scores;
    std::map<std::string, int, std::less<>> emoticon_scores;
};

// Loads a lexicon file: lines `term<TAB>score`, `#` comments ignored,
// emoticons in an `[emoticons]` section. Terms are folded to lowercase;
// duplicates are rejected.
inline Lexicon load_lexicon(std::istream& in) {
    const std::vector<std::string> lines = detail::read_lines(in);
    Lexicon lexicon;
    bool in_emoticons = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        std::string_view line = lines[i];
        if (detail::trim(line).empty() || detail::trim(line).front() == '#') continue;
        if (detail::trim(line) == "[emoticons]") {
            in_emoticons = true;
            continue;
        }
        if (detail::trim(line).front() == '[') {
            throw parse_error(line_no, "unknown section " + std::string(detail::trim(line)));
        }
        const std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw parse_error(line_no, "expected 'term<TAB>score'");
        }
        std::string term(detail::trim(line.substr(0, tab)));
        const std::string_view score_field = detail::trim(line.substr(tab + 1));
        if (term.empty()) {
            throw parse_error(line_no, "empty term");
        }
        const std::int64_t score = detail::parse_int(score_field, line_no, "score");
        if (score < INT_MIN || score > INT_MAX) {
            throw parse_error(line_no, "score out of range");
        }
        auto& table = in_emoticons ? lexicon.emoticon_scores : lexicon.term_scores;
        if (!in_emoticons) {
            for (char& c : term) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        if (!table.emplace(std::move(term), static_cast<int>(score)).second) {
            throw parse_error(line_no, "duplicate lexicon entry");
        }
    }
    return lexicon;
}

namespace detail {

inline bool is_word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace detail

// Total lexicon score of a text: emoticons matched against raw
// whitespace-separated tokens, terms against lowercased word pieces split
// on punctuation. Unknown tokens score 0.
inline int score_text(std::string_view text, const Lexicon& lexicon) {
    int score = 0;
    std::string word;
    auto flush_word = [&] {
        if (!word.empty()) {
            if (const auto it = lexicon.term_scores.find(word); it != lexicon.term_scores.end()) {
                score += it->second;
            }
            word.clear();
        }
    };

    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) break;
        const std::string_view token = text.substr(start, i - start);
        if (const auto it = lexicon.emoticon_scores.find(token);
            it != lexicon.emoticon_scores.end()) {
            score += it->second;
        }
        for (const char ch : token) {
            const auto c = static_cast<unsigned char>(ch);
            if (detail::is_word_byte(c)) {
                word.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32)
                                                    : static_cast<char>(c));
            } else {
                flush_word();
            }
        }
        flush_word();
    }
    return score;
}

// Score sign decides the label; zero-score texts are neutral.
inline SentimentLabel classify(std::string_view text, const Lexicon& lexicon) {
    const int score = score_text(text, lexicon);
    if (score > 0) return SentimentLabel::Positive;
    if (score < 0) return SentimentLabel::Negative;
    return SentimentLabel::Neutral;
}

}  // namespace sentibayes
