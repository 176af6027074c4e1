// End-to-end tests of the command-line tool: spec'd exit codes, stdout
// contracts, and determinism. Each test shells out to the built binary.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

namespace {

struct cli_result {
    int exit_code = -1;
    std::string out;
};

// Runs the binary with `args`; captures one stream. stderr is folded into
// the capture only when `merge_err` (stdout contracts stay testable).
cli_result run_cli(const std::string& args, bool merge_err = false) {
    const std::string cmd = std::string(RNC_CLI_PATH) + " " + args +
                            (merge_err ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    cli_result res;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) res.out.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string fixture(const std::string& name) { return std::string(FIXTURES_DIR) + "/" + name; }

std::string first_line(const std::string& s) {
    const auto pos = s.find('\n');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

TEST_CASE("compile: parity cascade with tanh w=-2 yields a one-neuron rnc") {
    const auto res = run_cli("compile " + fixture("parity_cascade.json") +
                             " --activation tanh --weight -2 -o cli_parity_rnc.json");
    REQUIRE(res.exit_code == 0);
    const auto report = nlohmann::json::parse(first_line(res.out));
    CHECK(report["neurons"] == 1);
    CHECK(report["network"] == false);

    std::ifstream written("cli_parity_rnc.json");
    REQUIRE(written.good());
    const auto doc = nlohmann::json::parse(written);
    CHECK(doc["neurons"].size() == 1);
    CHECK(doc["approximator"].is_null());
}

TEST_CASE("compile: tanh w=0.5 violates the weight inequality, exit 2") {
    const auto res = run_cli("compile " + fixture("flipflop_cascade.json") +
                             " --activation tanh --weight 0.5 -o cli_reject.json",
                             true);
    CHECK(res.exit_code == 2);
    CHECK(res.out.find("w > 1") != std::string::npos);
}

TEST_CASE("compile: missing input file exits 1") {
    const auto res = run_cli("compile no_such_spec.json");
    CHECK(res.exit_code == 1);
}

TEST_CASE("run: parity rnc on 'aaa' prints '1 0 1'") {
    REQUIRE(run_cli("compile " + fixture("parity_cascade.json") +
                    " --activation tanh --weight -2 -o cli_parity_rnc.json")
                .exit_code == 0);
    const auto res = run_cli("run cli_parity_rnc.json aaa");
    REQUIRE(res.exit_code == 0);
    CHECK(first_line(res.out) == "1 0 1");
}

TEST_CASE("run: empty input prints nothing and exits 0") {
    const auto res = run_cli("run cli_parity_rnc.json");
    CHECK(res.exit_code == 0);
    CHECK(first_line(res.out).empty());
}

TEST_CASE("run: input between grounding regions exits 3") {
    const auto res = run_cli("run cli_parity_rnc.json 0.5");
    CHECK(res.exit_code == 3);
}

TEST_CASE("run: trace flag emits one JSON line per step") {
    const auto res = run_cli("run cli_parity_rnc.json aa --trace");
    REQUIRE(res.exit_code == 0);
    std::istringstream lines(res.out);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "1 0");
    int rows = 0;
    while (std::getline(lines, line)) {
        const auto row = nlohmann::json::parse(line);
        ++rows;
        CHECK(row["t"] == rows);
        CHECK(row["interp"].size() == 1);
    }
    CHECK(rows == 2);
}

TEST_CASE("check aperiodic: flip-flop passes, parity fails with witness") {
    const auto ff = run_cli("check aperiodic " + fixture("flipflop_cascade.json"));
    REQUIRE(ff.exit_code == 0);
    CHECK(nlohmann::json::parse(first_line(ff.out))["aperiodic"] == true);

    const auto par = run_cli("check aperiodic " + fixture("parity_cascade.json"));
    REQUIRE(par.exit_code == 4);
    const auto report = nlohmann::json::parse(first_line(par.out));
    CHECK(report["aperiodic"] == false);
    REQUIRE(report.contains("witness"));
    CHECK(report["witness"].size() == 2);  // permutation of the two toggle states
}

TEST_CASE("check neuron: stored tanh flip-flop spec passes") {
    const auto res = run_cli("check neuron " + fixture("tanh_flipflop_w2.json") + " --grid 200");
    REQUIRE(res.exit_code == 0);
    const auto report = nlohmann::json::parse(first_line(res.out));
    CHECK(report["all_pass"] == true);
    CHECK(report["bounds_pass"] == true);
}

TEST_CASE("check homomorphism: parity rnc against its cascade passes") {
    const auto res = run_cli("check homomorphism cli_parity_rnc.json " +
                             fixture("parity_cascade.json") + " --trials 2000 --seed 5");
    REQUIRE(res.exit_code == 0);
    CHECK(nlohmann::json::parse(first_line(res.out))["violations"] == 0);
}

TEST_CASE("check equivalence: parity rnc against the acceptor passes") {
    const auto res = run_cli("check equivalence cli_parity_rnc.json " +
                             fixture("parity_acceptor.json") + " --trials 100 --max-len 60 --seed 5");
    REQUIRE(res.exit_code == 0);
    CHECK(nlohmann::json::parse(first_line(res.out))["equivalent"] == true);
}

TEST_CASE("demo ttop: small run passes and replays the stored prices") {
    const auto res = run_cli("demo ttop --bits 3 --trials 20 --seed 42");
    REQUIRE(res.exit_code == 0);
    CHECK(nlohmann::json::parse(first_line(res.out))["agreements"] == 20);

    const auto replay =
        run_cli("demo ttop --bits 4 --prices-file " + fixture("prices_tripletop.json"));
    REQUIRE(replay.exit_code == 0);
    CHECK(nlohmann::json::parse(first_line(replay.out))["agreements"] == 1);
}

TEST_CASE("demo cookie: generated episodes and the stored replay both pass") {
    const auto res = run_cli("demo cookie --episodes 5 --seed 11");
    REQUIRE(res.exit_code == 0);
    CHECK(nlohmann::json::parse(first_line(res.out))["agreements"] == 5);

    const auto replay =
        run_cli("demo cookie --episode-file " + fixture("cookie_episode_seed1.jsonl"));
    REQUIRE(replay.exit_code == 0);
    CHECK(nlohmann::json::parse(first_line(replay.out))["agreements"] == 1);
}

TEST_CASE("demo parity: noisy grounded run matches on every prefix") {
    const auto res = run_cli("demo parity --max-len 200 --seed 7");
    REQUIRE(res.exit_code == 0);
    const auto report = nlohmann::json::parse(first_line(res.out));
    CHECK(report["equivalent"] == true);
    CHECK(report["alternates"] == true);
}

TEST_CASE("determinism: same seed and flags give byte-identical stdout") {
    const auto a = run_cli("demo ttop --bits 3 --trials 15 --seed 9");
    const auto b = run_cli("demo ttop --bits 3 --trials 15 --seed 9");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const auto h1 = run_cli("check homomorphism cli_parity_rnc.json " +
                            fixture("parity_cascade.json") + " --trials 1000 --seed 5 --threads 1");
    const auto h2 = run_cli("check homomorphism cli_parity_rnc.json " +
                            fixture("parity_cascade.json") + " --trials 1000 --seed 5 --threads 2");
    REQUIRE(h1.exit_code == 0);
    CHECK(h1.out == h2.out);  // sharding must not change the report
}

TEST_CASE("parameter errors: unknown subcommand and bad subject exit 2") {
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("check nonsense somefile.json").exit_code == 2);
    CHECK(run_cli("demo nonsense").exit_code == 2);
}
