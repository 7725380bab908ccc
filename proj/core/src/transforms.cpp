#include "ldp/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "ldp/errors.hpp"
#include "ldp/quadrature.hpp"
#include "ldp/specfun.hpp"

namespace ldp::transforms {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool use_centered_increment(const models::SumModel& model) {
    return models::centering_rule(model) != models::CenteringRule::zero;
}

std::vector<double> log_subgrid(double s_top, std::size_t size) {
    std::vector<double> out(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double frac = double(i) / double(size - 1);
        out[i] = s_top * std::pow(10.0, -3.0 * (1.0 - frac));
    }
    return out;
}

// Leading term of 1 - lst_centered_sum as s -> 0, built from the model's
// norming rather than from the transform itself: mult * Gamma(1-beta) *
// tail(1/s) for the n / L_n / E[N(t)] routes, and Gamma(1-gamma) times the
// counting-tail asymptote at 1/(leading increment term) for infinite-mean
// stopped models.
struct LeadingTerm {
    bool counting_tail = false;
    double mult = 1.0;
    double gamma = 0.0;
};

LeadingTerm leading_term_rule(const models::SumModel& model) {
    switch (model.kind) {
        case models::ModelKind::iid:
            return {false, double(model.n), 0.0};
        case models::ModelKind::weighted: {
            const double beta = models::tail_index(model);
            return {false, kernels::ldp_norming(model.kernel, model.n, beta).L_n, 0.0};
        }
        case models::ModelKind::stopped: {
            const auto mean = counting::mean_count(model.counting, model.t);
            if (mean.finite) return {false, mean.value, 0.0};
            const auto asym = counting::count_tail_asymptote(model.counting, model.t);
            return {true, 1.0, asym.gamma};
        }
    }
    return {};
}

double leading_term_at(const models::SumModel& model, const LeadingTerm& rule, double beta,
                       double gamma_one_minus_beta, double s) {
    if (!rule.counting_tail)
        return rule.mult * gamma_one_minus_beta * laws::tail(model.law, 1.0 / s);
    const double increment_lead = beta < 1.0
                                      ? gamma_one_minus_beta * laws::tail(model.law, 1.0 / s)
                                      : laws::mean(model.law) * s;
    return specfun::gamma_fn(1.0 - rule.gamma) *
           counting::tail_count_asymptotic(model.counting, model.t, 1.0 / increment_lead);
}

}  // namespace

void validate(const TransformGrid& grid) {
    require(!grid.t_values.empty(), "transform grid: t_values must be non-empty");
    require(grid.s_subgrid_size >= 2, "transform grid: s_subgrid_size must be at least 2");
    require(static_cast<bool>(grid.s_rule), "transform grid: s_rule must be set");
    double prev_t = -std::numeric_limits<double>::infinity();
    double prev_s = std::numeric_limits<double>::infinity();
    for (double t : grid.t_values) {
        require(t > prev_t, "transform grid: t_values must be increasing");
        const double s = grid.s_rule(t);
        require(std::isfinite(s) && s > 0.0, "transform grid: s_rule must be strictly positive");
        require(s < prev_s, "transform grid: s_rule must be strictly decreasing along t_values");
        prev_t = t;
        prev_s = s;
    }
    for (double lam : grid.lambda_values)
        require(std::isfinite(lam) && lam > 0.0, "transform grid: lambda_values must be positive");
}

bool uniform_pass(const std::vector<double>& suprema, double tolerance) {
    if (suprema.empty()) return false;
    if (!(suprema.back() <= tolerance)) return false;
    const double slack = tolerance * 0.01;
    const std::size_t k = suprema.size();
    for (std::size_t i = (k >= 3 ? k - 3 : 0); i + 1 < k; ++i)
        if (suprema[i + 1] > suprema[i] + slack) return false;
    return true;
}

models::SumModel model_at_index(const models::SumModel& model, double index) {
    models::SumModel out = model;
    switch (model.kind) {
        case models::ModelKind::iid:
        case models::ModelKind::weighted: {
            const double r = std::round(index);
            require(r >= 1.0 && r <= 4.5e15 && std::abs(index - r) <= 1e-6 * std::max(1.0, r),
                    "model_at_index: iid and weighted indices must round to positive integers");
            out.n = static_cast<std::uint64_t>(r);
            break;
        }
        case models::ModelKind::stopped:
            require(std::isfinite(index) && index > 0.0,
                    "model_at_index: stopped index must be a positive time");
            out.t = index;
            break;
    }
    return out;
}

double lst_centered_sum_one_minus(const models::SumModel& model, double s) {
    require(std::isfinite(s) && s > 0.0, "lst_centered_sum: requires s > 0");
    const bool centered = use_centered_increment(model);
    switch (model.kind) {
        case models::ModelKind::iid: {
            const double a = laws::lst_increment(model.law, s, centered);
            return -std::expm1(double(model.n) * std::log1p(a));
        }
        case models::ModelKind::weighted: {
            const auto w = kernels::weights(model.kernel, model.n);
            double acc = 0.0;
            for (double wj : w) acc += std::log1p(laws::lst_increment(model.law, wj * s, centered));
            return -std::expm1(acc);
        }
        case models::ModelKind::stopped: {
            const double a = laws::lst_increment(model.law, s, centered);
            return counting::pgf_one_minus(model.counting, model.t, a);
        }
    }
    return 0.0;
}

double lst_centered_sum(const models::SumModel& model, double s) {
    return 1.0 - lst_centered_sum_one_minus(model, s);
}

UniformCheckReport error_term_sup(const models::SumModel& model, const TransformGrid& grid,
                                  double lambda, double tolerance) {
    require(std::isfinite(lambda) && lambda > 0.0, "error_term_sup: requires lambda > 0");
    require(std::isfinite(tolerance) && tolerance > 0.0, "error_term_sup: requires tolerance > 0");
    validate(grid);
    UniformCheckReport report;
    report.tolerance = tolerance;
    report.suprema.reserve(grid.t_values.size());
    for (double t : grid.t_values) {
        const models::SumModel at_t = model_at_index(model, t);
        const double beta = models::tail_index(at_t);
        const double gamma_one_minus_beta = specfun::gamma_fn(1.0 - beta);
        const LeadingTerm rule = leading_term_rule(at_t);
        const double s_top = lambda * grid.s_rule(t);
        double sup = 0.0;
        for (double s : log_subgrid(s_top, grid.s_subgrid_size)) {
            const double num = lst_centered_sum_one_minus(at_t, s);
            const double den = leading_term_at(at_t, rule, beta, gamma_one_minus_beta, s);
            sup = std::max(sup, std::abs(num / den - 1.0));
        }
        report.suprema.push_back(sup);
    }
    report.passed = uniform_pass(report.suprema, tolerance);
    return report;
}

UniformCheckReport tauberian_identity_check(double alpha, const TransformGrid& grid,
                                            double tolerance) {
    require(std::isfinite(alpha) && alpha >= 0.0, "tauberian_identity_check: requires alpha >= 0");
    require(std::isfinite(tolerance) && tolerance > 0.0,
            "tauberian_identity_check: requires tolerance > 0");
    validate(grid);
    UniformCheckReport report;
    report.tolerance = tolerance;
    report.suprema.reserve(grid.t_values.size());
    const double norm = specfun::gamma_fn(alpha + 1.0);
    for (double t : grid.t_values) {
        const double c_t = 1.0 + 1.0 / (1.0 + std::abs(t));
        const double s_top = grid.s_rule(t);
        double sup = 0.0;
        for (double s : log_subgrid(s_top, grid.s_subgrid_size)) {
            double ratio;
            if (alpha == 0.0) {
                const auto integral =
                    quad::integrate([c_t](double) { return c_t; }, 0.0, 1.0 / s, 1e-12, 1e-12);
                ratio = integral.value * s / (specfun::gamma_fn(2.0) * c_t);
            } else {
                const double inv_alpha = 1.0 / alpha;
                const auto transform = quad::integrate_to_infinity(
                    [s, c_t, inv_alpha](double u) {
                        return c_t * std::exp(-s * std::pow(u, inv_alpha));
                    },
                    0.0, 1e-14, 5e-11);
                ratio = transform.value / (norm * c_t * std::pow(s, -alpha));
            }
            sup = std::max(sup, std::abs(ratio - 1.0));
        }
        report.suprema.push_back(sup);
    }
    report.passed = uniform_pass(report.suprema, tolerance);
    return report;
}

SvipResult svip_check(const std::function<double(double, double)>& family, double lambda_factor,
                      double eta, const std::vector<double>& x_grid,
                      const std::vector<double>& t_grid) {
    require(static_cast<bool>(family), "svip_check: family must be set");
    require(std::isfinite(lambda_factor) && lambda_factor > 0.0,
            "svip_check: requires lambda_factor > 0");
    require(std::isfinite(eta) && eta > 0.0, "svip_check: requires eta > 0");
    require(!x_grid.empty() && !t_grid.empty(), "svip_check: grids must be non-empty");
    const auto check_grid = [](const std::vector<double>& g, const char* msg) {
        double prev = 0.0;
        for (double v : g) {
            require(std::isfinite(v) && v > prev, msg);
            prev = v;
        }
    };
    check_grid(x_grid, "svip_check: x_grid must be positive and increasing");
    check_grid(t_grid, "svip_check: t_grid must be positive and increasing");

    const std::size_t nx = x_grid.size();
    const std::size_t nt = t_grid.size();
    std::vector<std::vector<double>> gap(nt, std::vector<double>(nx));
    for (std::size_t j = 0; j < nt; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double base = family(t_grid[j], x_grid[i]);
            const double lifted = family(t_grid[j], lambda_factor * x_grid[i]);
            gap[j][i] = (std::isfinite(base) && base > 0.0 && std::isfinite(lifted))
                            ? std::abs(lifted / base - 1.0)
                            : std::numeric_limits<double>::infinity();
        }
    }
    for (std::size_t j = 0; j < nt; ++j)
        for (std::size_t i = nx - 1; i-- > 0;) gap[j][i] = std::max(gap[j][i], gap[j][i + 1]);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = nt - 1; j-- > 0;) gap[j][i] = std::max(gap[j][i], gap[j + 1][i]);

    SvipResult out;
    out.worst_gap = gap[nt - 1][nx - 1];
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            if (gap[j][i] < eta) {
                out.found = true;
                out.x_bar = x_grid[i];
                out.t_bar = t_grid[j];
                out.worst_gap = gap[j][i];
                return out;
            }
        }
    }
    return out;
}

}  // namespace ldp::transforms
