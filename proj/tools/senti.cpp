// senti: Bayesian sentiment-modeling command line tool.
//
// Subcommands:
//   update    conjugate posterior update on a count vector
//   evidence  log marginal likelihood of a count vector under a prior
//   run       per-bucket pipeline over a counts or records table
//   hist      Monte Carlo histogram of one measure under fixed parameters
//   classify  lexicon classifier: one text, or a file into a counts table
//
// Exit codes: 0 success, 1 I/O failure, 2 validation failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sentibayes/dirichlet.hpp"
#include "sentibayes/ingest.hpp"
#include "sentibayes/measures.hpp"
#include "sentibayes/pipeline.hpp"
#include "sentibayes/report.hpp"

namespace {

using namespace sentibayes;

std::vector<double> parse_real_triple(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(field, &used));
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw validation_error(std::string(what) + ": malformed real '" + field + "'");
        }
    }
    if (values.size() != 3) {
        throw validation_error(std::string(what) + ": expected three comma-separated values, got " +
                               std::to_string(values.size()));
    }
    return values;
}

std::vector<std::int64_t> parse_count_triple(const std::string& text, const char* what) {
    std::vector<std::int64_t> values;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stoll(field, &used));
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw validation_error(std::string(what) + ": malformed integer '" + field + "'");
        }
    }
    if (values.size() != 3) {
        throw validation_error(std::string(what) + ": expected three comma-separated values, got " +
                               std::to_string(values.size()));
    }
    return values;
}

std::vector<MeasureKind> parse_measures(const std::string& text) {
    std::vector<MeasureKind> kinds;
    std::stringstream ss(text);
    std::string code;
    while (std::getline(ss, code, ',')) {
        kinds.push_back(measure_from_code(code));
    }
    if (kinds.empty()) {
        throw validation_error("--measures: expected at least one measure code");
    }
    return kinds;
}

TableFormat parse_table_format(const std::string& text) {
    if (text == "csv") return TableFormat::Csv;
    if (text == "jsonl") return TableFormat::Jsonl;
    throw validation_error("--input-format: expected 'csv' or 'jsonl', got '" + text + "'");
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open input file '" + path + "'");
    }
    return in;
}

// Writes through a callback, removing the partial file if anything fails.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw io_error("cannot open output file '" + path + "'");
        }
        try {
            emit(out);
        } catch (...) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(path, ec);
            throw;
        }
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(path, ec);
            throw io_error("failed writing output file '" + path + "'");
        }
    }
}

void emit(const std::optional<std::string>& path, const std::function<void(std::ostream&)>& fn) {
    if (path) {
        write_file(*path, fn);
    } else {
        fn(std::cout);
        std::cout.flush();
    }
}

std::string dir_string(const DirichletParams& params) {
    std::string out = "Dir(";
    for (std::size_t i = 0; i < params.alpha().size(); ++i) {
        if (i) out += ", ";
        out += format_double(params.alpha()[i]);
    }
    out += ")";
    return out;
}

struct UpdateArgs {
    std::string prior = "1,1,1";
    std::string counts;
};

int cmd_update(const UpdateArgs& args) {
    const DirichletParams prior(parse_real_triple(args.prior, "--prior"));
    const SentimentCounts counts(parse_count_triple(args.counts, "--counts"));
    std::cout << dir_string(posterior_update(prior, counts)) << '\n';
    return 0;
}

int cmd_evidence(const UpdateArgs& args) {
    const DirichletParams prior(parse_real_triple(args.prior, "--prior"));
    const SentimentCounts counts(parse_count_triple(args.counts, "--counts"));
    std::cout << format_double(log_evidence(prior, counts)) << '\n';
    return 0;
}

struct RunArgs {
    std::string input;
    std::string input_format = "csv";
    bool records = false;
    std::string prior = "1,1,1";
    std::string mode = "independent";
    std::string measures = "nsp";
    std::size_t draws = 1000;
    std::uint64_t seed = 0;
    double ci_mass = 0.95;
    std::size_t bins = 50;
    std::string output_format = "csv";
    std::optional<std::string> output;
    std::optional<std::string> svg;
};

int cmd_run(const RunArgs& args) {
    const TableFormat format = parse_table_format(args.input_format);
    std::ifstream in = open_input(args.input);
    std::vector<BucketObservation> observations;
    if (args.records) {
        observations = aggregate_records(parse_records_table(in, format));
        if (observations.empty()) {
            throw validation_error("empty input: no data rows");
        }
    } else {
        observations = parse_counts_table(in, format);
    }

    PriorPolicy policy{PriorMode::Independent, DirichletParams(parse_real_triple(args.prior, "--prior"))};
    if (args.mode == "sequential") {
        policy.mode = PriorMode::Sequential;
    } else if (args.mode != "independent") {
        throw validation_error("--mode: expected 'independent' or 'sequential', got '" + args.mode +
                               "'");
    }
    const std::vector<MeasureKind> kinds = parse_measures(args.measures);
    if (args.output_format != "csv" && args.output_format != "json") {
        throw validation_error("--output-format: expected 'csv' or 'json', got '" +
                               args.output_format + "'");
    }

    // Compute everything before emitting anything, so failures cannot leave
    // behind a plausible-looking partial report.
    const std::vector<BucketResult> results =
        run(observations, policy, kinds, args.draws, args.seed, args.ci_mass, args.bins);

    emit(args.output, [&](std::ostream& out) {
        if (args.output_format == "csv") {
            write_run_report_csv(out, results, kinds);
        } else {
            out << run_report_json(results, kinds).dump(2) << '\n';
        }
    });
    if (args.svg) {
        write_file(*args.svg,
                   [&](std::ostream& out) { write_run_svg(out, results, kinds.front()); });
    }
    return 0;
}

struct HistArgs {
    std::string params;
    std::string measure = "nsp";
    std::size_t draws = 1000;
    std::uint64_t seed = 0;
    double ci_mass = 0.95;
    std::size_t bins = 50;
    std::optional<std::string> output;
    std::optional<std::string> svg;
};

int cmd_hist(const HistArgs& args) {
    const DirichletParams params(parse_real_triple(args.params, "--params"));
    const MeasureKind kind = measure_from_code(args.measure);
    const SampleBatch batch = draw(params, args.draws, args.seed);
    const MeasureSummary summary = summarize(kind, batch, args.ci_mass, args.bins);
    emit(args.output, [&](std::ostream& out) { write_hist_table(out, summary); });
    if (args.svg) {
        write_file(*args.svg, [&](std::ostream& out) { write_hist_svg(out, summary); });
    }
    return 0;
}

struct ClassifyArgs {
    std::string lexicon;
    std::optional<std::string> text;
    std::optional<std::string> input;
    std::string input_format = "tsv";
    bool per_record = false;
    std::optional<std::string> output;
};

// Classification input: TSV lines `bucket<TAB>text`, or JSONL objects with
// "bucket" and "text" keys.
std::vector<std::pair<std::string, std::string>> parse_texts(std::istream& in,
                                                             const std::string& format) {
    if (format != "tsv" && format != "jsonl") {
        throw validation_error("--input-format: expected 'tsv' or 'jsonl', got '" + format + "'");
    }
    const std::vector<std::string> lines = detail::read_lines(in);
    std::vector<std::pair<std::string, std::string>> texts;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (detail::trim(lines[i]).empty()) continue;
        if (format == "tsv") {
            const std::size_t tab = lines[i].find('\t');
            if (tab == std::string::npos) {
                throw parse_error(line_no, "expected 'bucket<TAB>text'");
            }
            std::string bucket(detail::trim(lines[i].substr(0, tab)));
            if (bucket.empty()) {
                throw parse_error(line_no, "empty bucket id");
            }
            texts.emplace_back(std::move(bucket), lines[i].substr(tab + 1));
        } else {
            const nlohmann::json obj = detail::parse_json_line(lines[i], line_no);
            if (!obj.is_object()) {
                throw parse_error(line_no, "expected a JSON object");
            }
            texts.emplace_back(detail::json_string(obj, "bucket", line_no),
                               detail::json_string(obj, "text", line_no));
        }
    }
    return texts;
}

int cmd_classify(const ClassifyArgs& args) {
    std::ifstream lex_in = open_input(args.lexicon);
    const Lexicon lexicon = load_lexicon(lex_in);

    if (args.text) {
        std::cout << label_name(classify(*args.text, lexicon)) << '\n';
        return 0;
    }
    if (!args.input) {
        throw validation_error("classify: need --text or --input");
    }
    std::ifstream in = open_input(*args.input);
    const auto texts = parse_texts(in, args.input_format);

    if (args.per_record) {
        emit(args.output, [&](std::ostream& out) {
            out << "bucket,label\n";
            for (const auto& [bucket, text] : texts) {
                out << bucket << ',' << label_name(classify(text, lexicon)) << '\n';
            }
        });
        return 0;
    }

    std::vector<LabeledRecord> records;
    records.reserve(texts.size());
    for (const auto& [bucket, text] : texts) {
        records.push_back({bucket, classify(text, lexicon), 1});
    }
    const std::vector<BucketObservation> observations = aggregate_records(records);
    emit(args.output, [&](std::ostream& out) { write_counts_csv(out, observations); });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian public sentiment modeling"};
    app.require_subcommand(1);

    UpdateArgs update_args;
    auto* update = app.add_subcommand("update", "Conjugate posterior update");
    update->add_option("--prior", update_args.prior, "Prior shape parameters a1,a2,a3")
        ->capture_default_str();
    update->add_option("--counts", update_args.counts, "Observed counts x1,x2,x3")->required();

    UpdateArgs evidence_args;
    auto* evidence = app.add_subcommand("evidence", "Log marginal likelihood of counts");
    evidence->add_option("--prior", evidence_args.prior, "Prior shape parameters a1,a2,a3")
        ->capture_default_str();
    evidence->add_option("--counts", evidence_args.counts, "Observed counts x1,x2,x3")->required();

    RunArgs run_args;
    std::string run_output, run_svg;
    auto* run_cmd = app.add_subcommand("run", "Per-bucket pipeline over a table");
    run_cmd->add_option("--input", run_args.input, "Input table path")->required();
    run_cmd->add_option("--input-format", run_args.input_format, "csv or jsonl")
        ->capture_default_str();
    run_cmd->add_flag("--records", run_args.records,
                      "Input is per-record labeled data, not pre-aggregated counts");
    run_cmd->add_option("--prior", run_args.prior, "Base prior a1,a2,a3")->capture_default_str();
    run_cmd->add_option("--mode", run_args.mode, "independent or sequential")
        ->capture_default_str();
    run_cmd->add_option("--measures", run_args.measures,
                        "Comma-separated measure codes (net,snet,psp,nsp,p2p,p2n)")
        ->capture_default_str();
    run_cmd->add_option("--draws", run_args.draws, "Monte Carlo draws per bucket")
        ->capture_default_str();
    run_cmd->add_option("--seed", run_args.seed, "Run seed")->capture_default_str();
    run_cmd->add_option("--ci", run_args.ci_mass, "Credible interval mass")->capture_default_str();
    run_cmd->add_option("--bins", run_args.bins, "Histogram bins")->capture_default_str();
    run_cmd->add_option("--output-format", run_args.output_format, "csv or json")
        ->capture_default_str();
    run_cmd->add_option("--output", run_output, "Report path (default: stdout)");
    run_cmd->add_option("--svg", run_svg, "SVG plot path for the first requested measure");

    HistArgs hist_args;
    std::string hist_output, hist_svg;
    auto* hist = app.add_subcommand("hist", "Monte Carlo histogram of one measure");
    hist->add_option("--params", hist_args.params, "Dirichlet shape parameters a1,a2,a3")
        ->required();
    hist->add_option("--measure", hist_args.measure, "Measure code")->capture_default_str();
    hist->add_option("--draws", hist_args.draws, "Monte Carlo draws")->capture_default_str();
    hist->add_option("--seed", hist_args.seed, "Sampling seed")->capture_default_str();
    hist->add_option("--ci", hist_args.ci_mass, "Credible interval mass")->capture_default_str();
    hist->add_option("--bins", hist_args.bins, "Histogram bins")->capture_default_str();
    hist->add_option("--output", hist_output, "Table path (default: stdout)");
    hist->add_option("--svg", hist_svg, "SVG histogram path");

    ClassifyArgs classify_args;
    std::string classify_text, classify_input, classify_output;
    auto* classify_cmd = app.add_subcommand("classify", "Lexicon classifier");
    classify_cmd->add_option("--lexicon", classify_args.lexicon, "Lexicon file path")->required();
    auto* text_opt = classify_cmd->add_option("--text", classify_text, "Classify one text");
    classify_cmd->add_option("--input", classify_input, "Texts file: bucket<TAB>text or JSONL")
        ->excludes(text_opt);
    classify_cmd->add_option("--input-format", classify_args.input_format, "tsv or jsonl")
        ->capture_default_str();
    classify_cmd->add_flag("--per-record", classify_args.per_record,
                           "Emit one labeled row per input text instead of aggregated counts");
    classify_cmd->add_option("--output", classify_output, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*update) return cmd_update(update_args);
        if (*evidence) return cmd_evidence(evidence_args);
        if (*run_cmd) {
            if (!run_output.empty()) run_args.output = run_output;
            if (!run_svg.empty()) run_args.svg = run_svg;
            return cmd_run(run_args);
        }
        if (*hist) {
            if (!hist_output.empty()) hist_args.output = hist_output;
            if (!hist_svg.empty()) hist_args.svg = hist_svg;
            return cmd_hist(hist_args);
        }
        if (*classify_cmd) {
            if (classify_cmd->count("--text") > 0) classify_args.text = classify_text;
            if (!classify_input.empty()) classify_args.input = classify_input;
            if (!classify_output.empty()) classify_args.output = classify_output;
            return cmd_classify(classify_args);
        }
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
