#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("senti_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

CliResult run_cli(const std::string& args) {
    static int invocation = 0;
    const fs::path out_path = work_dir() / ("stdout_" + std::to_string(invocation));
    const fs::path err_path = work_dir() / ("stderr_" + std::to_string(invocation));
    ++invocation;

    const std::string command = std::string("\"") + SENTI_CLI_PATH + "\" " + args + " > \"" +
                                out_path.string() + "\" 2> \"" + err_path.string() + "\"";
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), read_file(out_path), read_file(err_path)};
}

std::string data_file(const std::string& name) {
    return (fs::path(SENTI_DATA_DIR) / name).string();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

TEST_CASE("update prints the conjugate posterior") {
    const CliResult r = run_cli("update --prior 1,1,1 --counts 2,41,6");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "Dir(3, 42, 7)\n");

    const CliResult zero = run_cli("update --counts 0,0,0");
    CHECK(zero.exit_code == 0);
    CHECK(zero.out == "Dir(1, 1, 1)\n");

    const CliResult fractional = run_cli("update --prior 0.5,1.5,2 --counts 1,0,0");
    CHECK(fractional.exit_code == 0);
    CHECK(fractional.out == "Dir(1.5, 1.5, 2)\n");
}

TEST_CASE("update validates its numeric arguments") {
    CHECK(run_cli("update --prior 0,1,1 --counts 1,1,1").exit_code == 2);
    CHECK(run_cli("update --prior 1,1 --counts 1,1,1").exit_code == 2);
    CHECK(run_cli("update --prior 1,1,1 --counts 1,-2,1").exit_code == 2);
    CHECK(run_cli("update --prior 1,1,1 --counts 1,x,1").exit_code == 2);
    CHECK(run_cli("update").exit_code == 2);  // --counts is required
}

TEST_CASE("evidence prints the log marginal likelihood") {
    const CliResult r = run_cli("evidence --prior 1,1,1 --counts 1,0,0");
    CHECK(r.exit_code == 0);
    CHECK_THAT(std::stod(r.out), WithinAbs(std::log(1.0 / 3.0), 1e-12));

    const CliResult empty = run_cli("evidence --prior 2,5,1 --counts 0,0,0");
    CHECK(empty.exit_code == 0);
    CHECK(std::stod(empty.out) == 0.0);
}

TEST_CASE("help succeeds and a missing subcommand fails validation") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("update --help").exit_code == 0);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("run reports the case-study table and peaks on the right day") {
    const CliResult r =
        run_cli("run --input " + data_file("harvey_daily_counts.csv") + " --draws 400 --seed 0");
    REQUIRE(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 15);

    // posterior columns are exact integers
    const auto aug28 = split_fields(lines[5]);
    CHECK(aug28[0] == "2017-08-28");
    CHECK(aug28[7] == "39");
    CHECK(aug28[8] == "348");
    CHECK(aug28[9] == "39");

    // the mean NSP column peaks on Aug 28
    std::size_t argmax = 0;
    double best = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double mean = std::stod(split_fields(lines[i])[10]);
        if (mean > best) {
            best = mean;
            argmax = i;
        }
    }
    CHECK(split_fields(lines[argmax])[0] == "2017-08-28");
}

TEST_CASE("run emits byte-identical outputs for identical invocations") {
    const fs::path csv_a = work_dir() / "run_a.csv";
    const fs::path csv_b = work_dir() / "run_b.csv";
    const fs::path svg_a = work_dir() / "run_a.svg";
    const fs::path svg_b = work_dir() / "run_b.svg";
    const std::string base = "run --input " + data_file("harvey_daily_counts.csv") +
                             " --draws 300 --seed 0 --measures nsp,net";
    REQUIRE(run_cli(base + " --output " + csv_a.string() + " --svg " + svg_a.string())
                .exit_code == 0);
    REQUIRE(run_cli(base + " --output " + csv_b.string() + " --svg " + svg_b.string())
                .exit_code == 0);
    CHECK(read_file(csv_a) == read_file(csv_b));
    CHECK(read_file(svg_a) == read_file(svg_b));
    CHECK_THAT(read_file(svg_a), ContainsSubstring("mean-marker"));

    const CliResult json_a = run_cli(base + " --output-format json");
    const CliResult json_b = run_cli(base + " --output-format json");
    REQUIRE(json_a.exit_code == 0);
    CHECK(json_a.out == json_b.out);
    const auto parsed = nlohmann::json::parse(json_a.out);
    REQUIRE(parsed.size() == 14);
    CHECK(parsed[0]["bucket"] == "2017-08-24");
    CHECK(parsed[0]["posterior"] == nlohmann::json::array({3.0, 42.0, 7.0}));
    CHECK(parsed[0]["measures"].contains("nsp"));
    CHECK(parsed[0]["measures"].contains("net"));
}

TEST_CASE("run accepts JSONL input and sequential mode") {
    const fs::path input = work_dir() / "counts.jsonl";
    write_text(input,
               R"({"bucket":"2017-08-24","negative":2,"neutral":41,"positive":6})"
               "\n"
               R"({"bucket":"2017-08-25","negative":7,"neutral":185,"positive":18})"
               "\n");
    const CliResult r = run_cli("run --input " + input.string() +
                                " --input-format jsonl --mode sequential --draws 50 --seed 4");
    REQUIRE(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 3);
    const auto day2 = split_fields(lines[2]);
    CHECK(day2[1] == "3");  // day-2 prior is day-1's posterior
    CHECK(day2[7] == "10");
    CHECK(day2[8] == "227");
    CHECK(day2[9] == "25");
}

TEST_CASE("run distinguishes I/O failures from validation failures") {
    const std::string fixture = data_file("harvey_daily_counts.csv");
    CHECK(run_cli("run --input " + (work_dir() / "missing.csv").string()).exit_code == 1);
    CHECK(run_cli("run --input " + fixture + " --measures bogus").exit_code == 2);
    CHECK(run_cli("run --input " + fixture + " --mode both").exit_code == 2);
    CHECK(run_cli("run --input " + fixture + " --ci 1.5").exit_code == 2);
    CHECK(run_cli("run --input " + fixture + " --draws 0").exit_code == 2);
    CHECK(run_cli("run --input " + fixture + " --prior 0,1,1").exit_code == 2);
    CHECK(run_cli("run --input " + fixture + " --output-format yaml").exit_code == 2);

    const fs::path malformed = work_dir() / "malformed.csv";
    write_text(malformed, "bucket,negative,neutral,positive\n2017-08-24,1,2\n");
    const CliResult r = run_cli("run --input " + malformed.string());
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, ContainsSubstring("line 2"));

    // unwritable output path: I/O failure, and no partial file appears
    const fs::path unwritable = work_dir() / "no-such-dir" / "out.csv";
    CHECK(run_cli("run --input " + fixture + " --output " + unwritable.string()).exit_code == 1);
    CHECK(!fs::exists(unwritable));
}

TEST_CASE("run over per-record data matches the pre-aggregated equivalent") {
    const fs::path records = work_dir() / "records.csv";
    write_text(records,
               "bucket,label,weight\n"
               "2017-08-24,negative,2\n"
               "2017-08-24,neutral,41\n"
               "2017-08-24,positive,6\n"
               "2017-08-25,negative,7\n"
               "2017-08-25,neutral,185\n"
               "2017-08-25,positive,18\n");
    const fs::path counts = work_dir() / "counts_equiv.csv";
    write_text(counts,
               "bucket,negative,neutral,positive\n"
               "2017-08-24,2,41,6\n"
               "2017-08-25,7,185,18\n");
    const CliResult from_records =
        run_cli("run --records --input " + records.string() + " --draws 120 --seed 6");
    const CliResult from_counts =
        run_cli("run --input " + counts.string() + " --draws 120 --seed 6");
    REQUIRE(from_records.exit_code == 0);
    REQUIRE(from_counts.exit_code == 0);
    CHECK(from_records.out == from_counts.out);
}

TEST_CASE("hist reports shape statistics for the illustrative posterior") {
    const CliResult nsp =
        run_cli("hist --params 4,15,3 --measure nsp --draws 20000 --seed 3 --bins 40");
    REQUIRE(nsp.exit_code == 0);
    const auto lines = split_lines(nsp.out);
    REQUIRE(lines.size() == 42);  // header + 40 bins + summary
    const std::string& summary = lines.back();
    const auto skew_pos = summary.find("skewness=");
    REQUIRE(skew_pos != std::string::npos);
    CHECK(std::stod(summary.substr(skew_pos + 9)) > 0.0);
    CHECK_THAT(summary, ContainsSubstring("unstable_mean=false"));

    const CliResult p2n = run_cli("hist --params 4,15,3 --measure p2n --draws 5000 --seed 3");
    REQUIRE(p2n.exit_code == 0);
    CHECK_THAT(split_lines(p2n.out).back(), ContainsSubstring("unstable_mean=true"));

    const fs::path svg = work_dir() / "hist.svg";
    REQUIRE(run_cli("hist --params 4,15,3 --measure net --draws 2000 --seed 1 --svg " +
                    svg.string())
                .exit_code == 0);
    CHECK_THAT(read_file(svg), ContainsSubstring("hist-bar"));

    CHECK(run_cli("hist --params 4,15,3 --measure bogus").exit_code == 2);
    CHECK(run_cli("hist --params 4,15 --measure nsp").exit_code == 2);
}

TEST_CASE("classify labels one text directly") {
    const std::string lexicon = data_file("toy_lexicon.txt");
    CHECK(run_cli("classify --lexicon " + lexicon + " --text \"what a great rescue\"").out ==
          "positive\n");
    CHECK(run_cli("classify --lexicon " + lexicon + " --text \"terrible flooding\"").out ==
          "negative\n");
    CHECK(run_cli("classify --lexicon " + lexicon + " --text \"\"").out == "neutral\n");
    CHECK(run_cli("classify --lexicon " + (work_dir() / "nope.txt").string() +
                  " --text hi")
              .exit_code == 1);
    CHECK(run_cli("classify --lexicon " + lexicon).exit_code == 2);
}

TEST_CASE("classify aggregates a text file into a counts table run can consume") {
    const std::string lexicon = data_file("toy_lexicon.txt");
    const fs::path texts = work_dir() / "texts.tsv";
    write_text(texts,
               "2017-08-24\tterrible flooding everywhere\n"
               "2017-08-24\tso thankful for the brave rescue teams\n"
               "2017-08-24\tstreets under water\n"
               "2017-08-25\twe are safe now :)\n"
               "2017-08-25\tlost everything in the flood\n");
    const fs::path counts = work_dir() / "classified.csv";
    REQUIRE(run_cli("classify --lexicon " + lexicon + " --input " + texts.string() +
                    " --output " + counts.string())
                .exit_code == 0);
    CHECK(read_file(counts) ==
          "bucket,negative,neutral,positive\n"
          "2017-08-24,1,1,1\n"
          "2017-08-25,1,0,1\n");

    const CliResult end_to_end = run_cli("run --input " + counts.string() + " --draws 80");
    CHECK(end_to_end.exit_code == 0);
    CHECK(split_lines(end_to_end.out).size() == 3);

    const CliResult per_record = run_cli("classify --lexicon " + lexicon + " --input " +
                                         texts.string() + " --per-record");
    REQUIRE(per_record.exit_code == 0);
    const auto lines = split_lines(per_record.out);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "bucket,label");
    CHECK(lines[1] == "2017-08-24,negative");
    CHECK(lines[2] == "2017-08-24,positive");
    CHECK(lines[3] == "2017-08-24,neutral");
}

TEST_CASE("classify accepts JSONL text input") {
    const std::string lexicon = data_file("toy_lexicon.txt");
    const fs::path texts = work_dir() / "texts.jsonl";
    write_text(texts,
               R"({"bucket":"d1","text":"amazing heroes helping everyone"})"
               "\n"
               R"({"bucket":"d1","text":"devastating damage"})"
               "\n");
    const CliResult r = run_cli("classify --lexicon " + lexicon + " --input " + texts.string() +
                                " --input-format jsonl");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out ==
          "bucket,negative,neutral,positive\n"
          "d1,1,0,1\n");
}
