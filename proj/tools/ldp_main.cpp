#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "ldp/errors.hpp"
#include "ldp/oracle.hpp"
#include "ldp/predict.hpp"
#include "ldp/runner.hpp"
#include "ldp/scenario.hpp"
#include "ldp/specfun.hpp"

namespace {

const char* method_name(ldp::oracle::OracleMethod method) {
    switch (method) {
        case ldp::oracle::OracleMethod::quadrature: return "quadrature_convolution";
        case ldp::oracle::OracleMethod::enumeration: return "enumeration";
        case ldp::oracle::OracleMethod::simulation: return "walk_simulation";
    }
    return "";
}

void print_result(const ldp::oracle::OracleResult& result) {
    std::printf("value = %.17g\n", result.value);
    std::printf("error_bound = %.3g\n", result.error_bound);
    std::printf("method = %s\n", method_name(result.method));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and numerical verification of heavy-tailed sum tails"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Execute a scenario file and write its CSV report");
    std::string scenario_path;
    run_cmd->add_option("scenario", scenario_path, "scenario file with key = value lines")
        ->required();
    std::uint64_t seed_override = 0;
    auto* seed_opt = run_cmd->add_option("--seed", seed_override, "override the scenario seed");
    std::uint64_t budget_override = 0;
    auto* budget_opt = run_cmd->add_option("--budget", budget_override,
                                           "override the replication budget (>= 1000)");
    int workers_override = 1;
    auto* workers_opt =
        run_cmd->add_option("--workers", workers_override, "worker thread count (1-256)")
            ->check(CLI::Range(1, 256));
    std::string out_override;
    auto* out_opt = run_cmd->add_option("--out", out_override, "output CSV path");

    auto* verify_cmd = app.add_subcommand("verify", "Evaluate an independent reference oracle");
    verify_cmd->require_subcommand(1);

    auto* conv_cmd = verify_cmd->add_subcommand(
        "convolution_tail", "P[X_1 + ... + X_n > x] by direct density convolution");
    std::string conv_law = "pareto(0.5, 1)";
    int conv_n = 2;
    double conv_x = 0.0;
    conv_cmd->add_option("--law", conv_law, "increment law literal");
    conv_cmd->add_option("--n", conv_n, "number of summands (2 or 3)")->check(CLI::Range(2, 3));
    conv_cmd->add_option("--x", conv_x, "tail level")->required();

    auto* pgf_cmd =
        verify_cmd->add_subcommand("enumerate_pgf", "E[z^N(t)] by direct pmf summation");
    std::string pgf_counting = "poisson(1)";
    double pgf_t = 1.0;
    double pgf_z = 0.5;
    std::uint64_t pgf_n_max = 1000;
    pgf_cmd->add_option("--counting", pgf_counting, "counting process literal");
    pgf_cmd->add_option("--t", pgf_t, "horizon t");
    pgf_cmd->add_option("--z", pgf_z, "pgf argument in [0, 1]")->check(CLI::Range(0.0, 1.0));
    pgf_cmd->add_option("--n-max", pgf_n_max, "enumeration cutoff");

    auto* walk_cmd = verify_cmd->add_subcommand(
        "first_passage_walk", "empirical first-passage survival of gaussian walks");
    std::uint64_t walk_count = 100000;
    std::uint64_t walk_n_max = 10;
    std::uint64_t walk_seed = 1;
    walk_cmd->add_option("--walks", walk_count, "number of simulated walks");
    walk_cmd->add_option("--n-max", walk_n_max, "largest step count tracked")
        ->check(CLI::Range(std::uint64_t(2), std::uint64_t(1) << 20));
    walk_cmd->add_option("--seed", walk_seed, "simulation seed");

    auto* const_cmd = app.add_subcommand("constants", "Print special-function reference values");
    const_cmd->require_subcommand(1);

    auto* gamma_cmd = const_cmd->add_subcommand("gamma", "gamma function");
    double gamma_x = 0.5;
    gamma_cmd->add_option("--x", gamma_x, "argument")->required();

    auto* zeta_cmd = const_cmd->add_subcommand("zeta", "Riemann zeta function, s > 1");
    double zeta_s = 2.0;
    zeta_cmd->add_option("--s", zeta_s, "argument (> 1)")->required();

    auto* bigjump_cmd = const_cmd->add_subcommand(
        "bigjump", "stopping constant Gamma(1-gamma) Gamma(1-beta)^gamma / Gamma(1-gamma*beta)");
    double bj_gamma = 0.5;
    double bj_beta = 0.5;
    bigjump_cmd->add_option("--gamma", bj_gamma, "counting tail exponent in (0,1)")->required();
    bigjump_cmd->add_option("--beta", bj_beta, "increment tail index in (0,1)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            auto sc = ldp::scenario::load_scenario_file(scenario_path);
            if (*seed_opt) sc.seed = seed_override;
            if (*budget_opt) {
                if (budget_override < 1000) {
                    std::fprintf(stderr, "error: --budget must be at least 1000\n");
                    return 1;
                }
                sc.budget = budget_override;
            }
            if (*workers_opt) sc.workers = workers_override;
            if (*out_opt) sc.out = out_override;
            return ldp::runner::run(sc);
        }
        if (*conv_cmd) {
            const auto law = ldp::scenario::parse_law(conv_law);
            print_result(ldp::oracle::convolution_tail(law, conv_n, conv_x));
            return 0;
        }
        if (*pgf_cmd) {
            const auto spec = ldp::scenario::parse_counting(pgf_counting);
            print_result(ldp::oracle::enumerate_pgf(spec, pgf_t, pgf_z, pgf_n_max));
            return 0;
        }
        if (*walk_cmd) {
            const auto rows = ldp::oracle::first_passage_walk(walk_count, walk_n_max, walk_seed);
            std::printf("n,empirical,exact,stderr\n");
            for (const auto& row : rows)
                std::printf("%" PRIu64 ",%.17g,%.17g,%.3g\n", row.n, row.empirical, row.exact,
                            row.stderr_);
            return 0;
        }
        if (*gamma_cmd) {
            const auto v = ldp::specfun::gamma_checked(gamma_x);
            std::printf("value = %.17g\n", v.value);
            std::printf("error_bound = %.3g\n", v.abs_error_bound);
            return 0;
        }
        if (*zeta_cmd) {
            const auto v = ldp::specfun::riemann_zeta_checked(zeta_s);
            std::printf("value = %.17g\n", v.value);
            std::printf("error_bound = %.3g\n", v.abs_error_bound);
            return 0;
        }
        if (*bigjump_cmd) {
            std::printf("value = %.17g\n", ldp::predict::big_jump_constant(bj_gamma, bj_beta));
            return 0;
        }
    } catch (const ldp::OutOfRegimeError& e) {
        std::fprintf(stderr, "out of regime: %s\n", e.what());
        return 2;
    } catch (const ldp::UnsupportedError& e) {
        std::fprintf(stderr, "unsupported: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
