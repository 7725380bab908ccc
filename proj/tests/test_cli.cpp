#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

const std::string kBin = LDP_BIN;
const std::string kScenarioDir = LDP_SCENARIO_DIR;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_capture.txt";
    const std::string cmd = "\"" + kBin + "\" " + args + " > " + out_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (status == -1) ? -1 : WEXITSTATUS(status);
    std::ifstream in(out_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string drop_wall_ms(const std::string& csv_line) {
    return csv_line.substr(0, csv_line.rfind(','));
}

std::string field(const std::string& csv_line, int index) {
    std::istringstream in(csv_line);
    std::string cell;
    for (int i = 0; i <= index; ++i) std::getline(in, cell, ',');
    return cell;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

const std::string kFastScenario =
    "name = cli-det\n"
    "model = iid\n"
    "law = pareto(0.7, 1)\n"
    "n_grid = 50\n"
    "x_rule = target_ld(0.02)\n"
    "budget = 2000\n"
    "seed = 1\n"
    "tolerance = 5\n"
    "checks = mc_vs_prediction\n";

}  // namespace

TEST_CASE("run executes a scenario, writes its report, and exits cleanly") {
    write_file("cli_fast.scn", kFastScenario);
    const auto r = run_cli("run cli_fast.scn --out cli_fast.csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("# all checks passed") != std::string::npos);
    const auto lines = read_lines("cli_fast.csv");
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] ==
          "scenario,index,t_or_n,x,estimate,stderr,prediction,ratio,ld_condition,method,"
          "replications,capped_fraction,wall_ms");
    CHECK(field(lines[1], 0) == "cli-det");
    CHECK(field(lines[1], 9) == "naive");
    CHECK(field(lines[1], 10) == "2000");
}

TEST_CASE("identical seeds give identical reports modulo timing") {
    write_file("cli_fast.scn", kFastScenario);
    CHECK(run_cli("run cli_fast.scn --seed 777 --out cli_a.csv").exit_code == 0);
    CHECK(run_cli("run cli_fast.scn --seed 777 --out cli_b.csv").exit_code == 0);
    CHECK(run_cli("run cli_fast.scn --seed 778 --out cli_c.csv").exit_code == 0);
    const auto a = read_lines("cli_a.csv");
    const auto b = read_lines("cli_b.csv");
    const auto c = read_lines("cli_c.csv");
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(drop_wall_ms(a[i]) == drop_wall_ms(b[i]));
    CHECK(field(a[1], 4) != field(c[1], 4));
}

TEST_CASE("worker count never changes the numbers") {
    write_file("cli_fast.scn", kFastScenario);
    CHECK(run_cli("run cli_fast.scn --workers 1 --out cli_w1.csv").exit_code == 0);
    CHECK(run_cli("run cli_fast.scn --workers 4 --out cli_w4.csv").exit_code == 0);
    const auto w1 = read_lines("cli_w1.csv");
    const auto w4 = read_lines("cli_w4.csv");
    REQUIRE(w1.size() == w4.size());
    for (std::size_t i = 0; i < w1.size(); ++i)
        CHECK(drop_wall_ms(w1[i]) == drop_wall_ms(w4[i]));
}

TEST_CASE("transform scenario passes and writes sibling reports") {
    const auto r =
        run_cli("run " + kScenarioDir + "/transform_checks.scn --out cli_tc.csv");
    CHECK(r.exit_code == 0);
    const auto error_term = read_lines("cli_tc_error_term.csv");
    REQUIRE(!error_term.empty());
    CHECK(error_term[0] == "scenario,lambda,t,sup,passed");
    const auto svip = read_lines("cli_tc_svip.csv");
    REQUIRE(svip.size() >= 2);
    CHECK(svip[0] == "scenario,family,lambda,eta,found,x_bar,t_bar,worst_gap");
    CHECK(field(svip[1], 4) == "1");
}

TEST_CASE("exit codes distinguish failure modes") {
    CHECK(run_cli("run /nonexistent/file.scn").exit_code == 1);

    write_file("cli_bad.scn", kFastScenario + "bogus = 3\n");
    const auto bad = run_cli("run cli_bad.scn");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("bogus") != std::string::npos);

    const auto refused =
        run_cli("run " + kScenarioDir + "/compound_zeta_refused.scn --out cli_ref.csv");
    CHECK(refused.exit_code == 2);

    write_file("cli_custom.scn",
               "name = cli-custom\nmodel = weighted\nlaw = pareto(0.5, 1)\n"
               "kernel = custom(1, 0.5)\nn_grid = 10\nbudget = 1000\nseed = 1\n"
               "checks = scaling\n");
    CHECK(run_cli("run cli_custom.scn --out cli_custom.csv").exit_code == 3);

    write_file("cli_small.scn", kFastScenario);
    CHECK(run_cli("run cli_small.scn --budget 500").exit_code != 0);

    CHECK(run_cli("").exit_code != 0);
}

TEST_CASE("verification subcommands print oracle values") {
    const auto conv =
        run_cli("verify convolution_tail --law \"pareto(0.5, 1)\" --n 2 --x 100");
    CHECK(conv.exit_code == 0);
    CHECK(conv.output.find("0.19899748742") != std::string::npos);

    const auto pgf =
        run_cli("verify enumerate_pgf --counting \"poisson(2)\" --t 5 --z 0.5 --n-max 400");
    CHECK(pgf.exit_code == 0);
    CHECK(pgf.output.find("0.00673794699908") != std::string::npos);

    const auto walk = run_cli("verify first_passage_walk --walks 20000 --n-max 4 --seed 5");
    CHECK(walk.exit_code == 0);
    CHECK(walk.output.find("n,empirical,exact,stderr") != std::string::npos);
    CHECK(walk.output.find("0.375") != std::string::npos);
}

TEST_CASE("constants subcommand prints frozen reference values") {
    const auto gamma = run_cli("constants gamma --x 0.5");
    CHECK(gamma.exit_code == 0);
    CHECK(gamma.output.find("1.77245385090551") != std::string::npos);

    const auto zeta = run_cli("constants zeta --s 2");
    CHECK(zeta.exit_code == 0);
    CHECK(zeta.output.find("1.64493406684822") != std::string::npos);

    const auto bigjump = run_cli("constants bigjump --gamma 0.5 --beta 0.5");
    CHECK(bigjump.exit_code == 0);
    CHECK(bigjump.output.find("1.92565556489283") != std::string::npos);
}
