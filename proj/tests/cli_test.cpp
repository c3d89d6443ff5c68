#include "antparse/cli.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace antparse;
using antparse::testing::fixture_path;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

auto cli(std::vector<std::string> args) -> Run {
    auto out = std::ostringstream {};
    auto err = std::ostringstream {};
    const auto status = run_cli(args, out, err);
    return Run {status, out.str(), err.str()};
}

auto lines(const std::string& text) -> std::vector<std::string> {
    auto result = std::vector<std::string> {};
    auto stream = std::istringstream {text};
    auto line = std::string {};
    while (std::getline(stream, line)) {
        result.push_back(line);
    }
    return result;
}

auto temp_file(const std::string& name, const std::string& content) -> std::string {
    const auto path = std::filesystem::temp_directory_path() / name;
    auto out = std::ofstream {path};
    out << content;
    return path.string();
}

const auto paper = fixture_path("paper.grammar");

}  // namespace

TEST_CASE("recognize accepts the textbook input") {
    const auto run = cli({"recognize", "--grammar", paper, "--input", "a b b c d e", "--seed", "42"});
    CHECK(run.status == 0);
    CHECK(run.out.find("accepted:   yes") != std::string::npos);
    CHECK(run.out.find("steps:      4 (3 hops)") != std::string::npos);
    CHECK(run.out.find("rule 6 (B -> d)") != std::string::npos);
}

TEST_CASE("recognize rejects a non-member with exit 1") {
    const auto run = cli({"recognize", "--grammar", paper, "--input", "a c e", "--iters", "5"});
    CHECK(run.status == 1);
    CHECK(run.out.find("not accepted within budget") != std::string::npos);
}

TEST_CASE("usage and load errors exit 2") {
    CHECK(cli({"recognize", "--input", "a"}).status == 2);
    CHECK(cli({}).status == 2);
    CHECK(cli({"recognize", "--grammar", paper, "--input", "a b", "--q0", "1.5"}).status == 2);

    const auto missing = cli({"oracle", "--grammar", "/no/such.grammar", "--input", "a"});
    CHECK(missing.status == 2);
    CHECK(missing.err.find("/no/such.grammar") != std::string::npos);

    const auto bad = temp_file("antparse_bad.grammar", "start: S\nS -> a\nA ->\n");
    const auto malformed = cli({"oracle", "--grammar", bad, "--input", "a"});
    CHECK(malformed.status == 2);
    CHECK(malformed.err.find(bad + ":3:") != std::string::npos);

    const auto unknown = cli({"oracle", "--grammar", paper, "--input", "a x c"});
    CHECK(unknown.status == 2);
    CHECK(unknown.err.find("\"x\"") != std::string::npos);
}

TEST_CASE("help exits 0") {
    CHECK(cli({"--help"}).status == 0);
}

TEST_CASE("oracle subcommand") {
    const auto member = cli({"oracle", "--grammar", paper, "--input", "a b c d e"});
    CHECK(member.status == 0);
    CHECK(member.out.find("shortest steps:  3") != std::string::npos);

    const auto non_member = cli({"oracle", "--grammar", paper, "--input", "a c e"});
    CHECK(non_member.status == 1);
    CHECK(non_member.out.find("member:          no") != std::string::npos);

    const auto start = cli({"oracle", "--grammar", paper, "--input", "S", "--json"});
    CHECK(start.status == 0);
    const auto record = Json::parse(start.out);
    CHECK(record["member"] == true);
    CHECK(record["shortest_steps"] == 0);

    const auto chars = cli({"oracle", "--grammar", paper, "--input", "abcde", "--chars"});
    CHECK(chars.status == 0);

    const auto budget =
        cli({"oracle", "--grammar", paper, "--input", "a b b c d e", "--max-states", "3"});
    CHECK(budget.status == 3);
}

TEST_CASE("JSON trace replays and is reproducible") {
    const auto args = std::vector<std::string> {"recognize", "--grammar", paper, "--input",
                                                "a b b c d e", "--seed", "7", "--json",
                                                "--trace"};
    const auto first = cli(args);
    const auto second = cli(args);
    CHECK(first.status == 0);
    CHECK(first.out == second.out);

    const auto record = Json::parse(first.out);
    CHECK(record["accepted"] == true);
    CHECK(record["seed"] == 7);
    CHECK(record["config"]["n_ants"] == 100);
    CHECK(record["config"]["max_hops"] == 4 * 6 * 6);
    CHECK(record["iterations"].size() == 50);
    CHECK(record["steps"] == record["derivation"].size());

    const auto grammar = load_grammar(paper);
    const auto derivation = derivation_from_json(grammar, record["derivation"]);
    const auto omega = parse_input(record["input"].get<std::string>(), grammar);
    CHECK(replay(grammar, derivation, omega) == grammar.form({"S"}));

    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(cli(threaded).out == first.out);
}

TEST_CASE("bench streams one JSON object per run and a summary") {
    const auto inputs = temp_file("antparse_bench.inputs", "a b c d e\n\na x c\na c e\n");
    const auto run = cli({"bench", "--grammar", paper, "--inputs", inputs, "--seeds", "3",
                          "--iters", "10", "--jobs", "2"});
    CHECK(run.status == 0);
    const auto output = lines(run.out);
    REQUIRE(output.size() == 3 + 1 + 3 + 1);

    const auto first = Json::parse(output[0]);
    CHECK(first["input"] == "a b c d e");
    CHECK(first["seed"] == 42);
    CHECK(first["oracle_steps"] == 3);
    CHECK(first.contains("millis"));
    CHECK(Json::parse(output[2])["seed"] == 44);

    const auto error = Json::parse(output[3]);
    CHECK(error["input"] == "a x c");
    CHECK(error["error"].get<std::string>().find("\"x\"") != std::string::npos);

    CHECK(Json::parse(output[4])["accepted"] == false);

    const auto summary = Json::parse(output.back());
    CHECK(summary["summary"] == true);
    CHECK(summary["skipped"] == 1);
    CHECK(summary["runs"] == 6);
    CHECK(summary["soundness_violations"] == 0);
    CHECK(summary["oracle_agreement"] == 1.0);
}

TEST_CASE("bench with an empty inputs file exits 2") {
    const auto inputs = temp_file("antparse_empty.inputs", "\n# nothing\n");
    CHECK(cli({"bench", "--grammar", paper, "--inputs", inputs}).status == 2);
}
