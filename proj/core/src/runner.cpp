#include "ldp/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ldp/errors.hpp"
#include "ldp/predict.hpp"
#include "ldp/transforms.hpp"

namespace ldp::runner {

namespace {

constexpr const char* kCsvHeader =
    "scenario,index,t_or_n,x,estimate,stderr,prediction,ratio,ld_condition,method,"
    "replications,capped_fraction,wall_ms";

constexpr double kErrorTermTolerance = 0.05;

struct CsvFile {
    FILE* f = nullptr;
    explicit CsvFile(const std::string& path) : f(std::fopen(path.c_str(), "wb")) {}
    CsvFile(const CsvFile&) = delete;
    CsvFile& operator=(const CsvFile&) = delete;
    ~CsvFile() {
        if (f) std::fclose(f);
    }
};

void write_row(FILE* f, const std::string& scenario, std::size_t index, double t_or_n, double x,
               double estimate, double std_error, double prediction, double ratio, double ld,
               const std::string& method, std::uint64_t reps, double capped, double wall_ms) {
    std::fprintf(f,
                 "%s,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%" PRIu64 ",%.17g,%.3f\n",
                 scenario.c_str(), index, t_or_n, x, estimate, std_error, prediction, ratio, ld,
                 method.c_str(), (std::uint64_t)reps, capped, wall_ms);
}

std::string sibling_path(const std::string& out, const char* suffix) {
    std::string stem = out;
    if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0)
        stem.erase(stem.size() - 4);
    return stem + suffix;
}

double svip_family_value(const std::string& family, double t, double x) {
    if (family == "constant") return 1.0 + 1.0 / t;
    if (family == "log") return (1.0 + 1.0 / t) * std::log(x);
    return 1.0 + t / x;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

int run(const scenario::Scenario& sc) {
    for (const std::string& line : scenario::describe(sc)) std::printf("# %s\n", line.c_str());
    std::fflush(stdout);

    CsvFile csv(sc.out);
    if (!csv.f) {
        std::fprintf(stderr, "error: cannot open output file '%s'\n", sc.out.c_str());
        return 1;
    }
    std::fprintf(csv.f, "%s\n", kCsvHeader);

    const auto wants = [&](scenario::Check c) {
        return std::find(sc.checks.begin(), sc.checks.end(), c) != sc.checks.end();
    };
    const mc::SeedSpec seeds{sc.seed};
    bool all_passed = true;
    std::size_t row = 0;

    try {
        if (wants(scenario::Check::mc_vs_prediction)) {
            const auto model_family = [&sc](double index) {
                return transforms::model_at_index(sc.model, index);
            };
            const auto x_rule = [&sc, &model_family](double index) {
                switch (sc.x_kind) {
                    case scenario::XRuleKind::fixed:
                        return sc.x_value;
                    case scenario::XRuleKind::target_ld:
                        return predict::level_for_ld(model_family(index), sc.x_value);
                    case scenario::XRuleKind::list:
                        for (std::size_t i = 0; i < sc.grid.size(); ++i)
                            if (sc.grid[i] == index) return sc.x_list[i];
                        return sc.x_list.back();
                }
                return sc.x_value;
            };
            const auto rows =
                mc::convergence_table(model_family, x_rule, sc.grid, sc.budget, seeds, sc.cap,
                                      sc.method, sc.workers, sc.mix_p);
            for (const auto& r : rows) {
                write_row(csv.f, sc.name, row++, r.index, r.x, r.p_hat, r.std_error, r.prediction,
                          r.ratio, r.ld_condition, r.method, r.replications, r.capped_fraction,
                          r.wall_ms);
                if (!(std::isfinite(r.ratio) && std::abs(r.ratio - 1.0) <= sc.tolerance)) {
                    all_passed = false;
                    std::fprintf(stderr,
                                 "check mc_vs_prediction failed at index %.6g: "
                                 "ratio %.6g is outside 1 +- %.4g\n",
                                 r.index, r.ratio, sc.tolerance);
                }
            }
        }

        if (wants(scenario::Check::scaling)) {
            if (sc.model.kind != models::ModelKind::weighted)
                throw UnsupportedError("scaling check applies to weighted models only");
            const auto t0 = std::chrono::steady_clock::now();
            const double beta = models::tail_index(sc.model);
            std::vector<std::uint64_t> n_grid;
            for (int i = 0; i <= 24; ++i) {
                const auto n = std::uint64_t(std::llround(100.0 * std::pow(10.0, i / 8.0)));
                if (n_grid.empty() || n > n_grid.back()) n_grid.push_back(n);
            }
            const double slope = kernels::scaling_exponent(sc.model.kernel, beta, n_grid);
            double expected = 1.0;
            double slope_tol = 0.02;
            switch (sc.model.kernel.kind) {
                case kernels::KernelKind::exponential:
                    expected = 1.0;
                    slope_tol = 0.02;
                    break;
                case kernels::KernelKind::algebraic:
                    expected = 1.0 + beta * (1.0 - sc.model.kernel.nu);
                    slope_tol = 0.05;
                    break;
                case kernels::KernelKind::custom:
                    throw UnsupportedError(
                        "scaling check: custom kernels have no reference exponent");
            }
            write_row(csv.f, sc.name, row++, 0.0, 0.0, slope, 0.0, expected, slope / expected,
                      0.0, "scaling", 0, 0.0, elapsed_ms(t0));
            if (!(std::abs(slope - expected) <= slope_tol)) {
                all_passed = false;
                std::fprintf(stderr,
                             "check scaling failed: measured exponent %.4f vs expected %.4f "
                             "(tolerance %.2f)\n",
                             slope, expected, slope_tol);
            }
        }

        if (wants(scenario::Check::error_term)) {
            transforms::TransformGrid grid;
            grid.t_values = sc.grid;
            const double coeff = sc.s_coeff;
            const double exponent = sc.s_exponent;
            grid.s_rule = [coeff, exponent](double t) { return coeff * std::pow(t, -exponent); };
            grid.lambda_values = sc.lambda_values;
            const std::string path = sibling_path(sc.out, "_error_term.csv");
            CsvFile report_csv(path);
            if (!report_csv.f) {
                std::fprintf(stderr, "error: cannot open output file '%s'\n", path.c_str());
                return 1;
            }
            std::fprintf(report_csv.f, "scenario,lambda,t,sup,passed\n");
            for (double lambda : sc.lambda_values) {
                const auto report =
                    transforms::error_term_sup(sc.model, grid, lambda, kErrorTermTolerance);
                for (std::size_t i = 0; i < report.suprema.size(); ++i)
                    std::fprintf(report_csv.f, "%s,%.17g,%.17g,%.17g,%d\n", sc.name.c_str(),
                                 lambda, grid.t_values[i], report.suprema[i], int(report.passed));
                if (!report.passed) {
                    all_passed = false;
                    std::fprintf(stderr,
                                 "check error_term failed at lambda = %.4g: final sup %.4g "
                                 "(tolerance %.3g, decreasing tail required)\n",
                                 lambda, report.suprema.back(), kErrorTermTolerance);
                }
            }
        }

        if (wants(scenario::Check::svip)) {
            const std::string path = sibling_path(sc.out, "_svip.csv");
            CsvFile report_csv(path);
            if (!report_csv.f) {
                std::fprintf(stderr, "error: cannot open output file '%s'\n", path.c_str());
                return 1;
            }
            std::fprintf(report_csv.f, "scenario,family,lambda,eta,found,x_bar,t_bar,worst_gap\n");
            std::vector<double> x_grid;
            for (int e = 1; e <= 36; ++e) x_grid.push_back(std::pow(10.0, e));
            std::vector<double> t_grid;
            for (int e = 0; e <= 40; e += 4) t_grid.push_back(std::pow(10.0, e));
            const std::string family = sc.svip_family;
            const auto res = transforms::svip_check(
                [&family](double t, double x) { return svip_family_value(family, t, x); },
                sc.svip_lambda, sc.svip_eta, x_grid, t_grid);
            std::fprintf(report_csv.f, "%s,%s,%.17g,%.17g,%d,%.17g,%.17g,%.17g\n",
                         sc.name.c_str(), family.c_str(), sc.svip_lambda, sc.svip_eta,
                         int(res.found), res.x_bar, res.t_bar, res.worst_gap);
            if (!res.found) {
                all_passed = false;
                std::fprintf(stderr,
                             "check svip failed: no grid witness for family '%s' at "
                             "lambda = %.4g, eta = %.4g (best gap %.4g)\n",
                             family.c_str(), sc.svip_lambda, sc.svip_eta, res.worst_gap);
            }
        }
    } catch (const OutOfRegimeError& e) {
        std::fprintf(stderr, "out of regime: %s\n", e.what());
        return 2;
    } catch (const UnsupportedError& e) {
        std::fprintf(stderr, "unsupported: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    if (!all_passed) return 1;
    std::printf("# all checks passed; report written to %s\n", sc.out.c_str());
    return 0;
}

}  // namespace ldp::runner
