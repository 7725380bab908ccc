#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ldp/models.hpp"

namespace ldp::transforms {

// Grid of horizons t with an s-scale rule s_t and the lambda multipliers the
// error-term condition is checked at. s-subgrids are logarithmic with
// s_subgrid_size points spanning three decades below lambda * s_t.
struct TransformGrid {
    std::vector<double> t_values;
    std::function<double(double)> s_rule;
    std::vector<double> lambda_values = {1.0};
    std::size_t s_subgrid_size = 121;
};

// Throws std::invalid_argument unless t_values is increasing, s_rule is
// strictly positive and strictly decreasing along t_values, lambda_values are
// positive, and the subgrid has at least two points.
void validate(const TransformGrid& grid);

struct UniformCheckReport {
    std::vector<double> suprema;  // one supremum per t grid point
    bool passed = false;
    double tolerance = 0.0;
};

// Shared pass rule: the final supremum is at or below tolerance and the last
// three suprema are non-increasing (up to a tolerance/100 float slack).
bool uniform_pass(const std::vector<double>& suprema, double tolerance);

// Copy of the model with its horizon replaced: n for iid and weighted models
// (index must round to a positive integer), t for stopped models.
models::SumModel model_at_index(const models::SumModel& model, double index);

// Laplace-Stieltjes transform of the centred sum at s > 0, composed from the
// increment transform in closed form: power for iid sums, a product over
// cumulative kernel weights for weighted sums, and the counting pgf for
// stopped sums. Centering follows models::centering_rule.
double lst_centered_sum(const models::SumModel& model, double s);

// 1 - lst_centered_sum(model, s) at full relative accuracy for small s.
double lst_centered_sum_one_minus(const models::SumModel& model, double s);

// For each t, the supremum over the s-subgrid below lambda * s_t of
// |(1 - lst_centered_sum)/(leading tail term) - 1|, where the leading term is
// Gamma(1-beta) * L_t(1/s) * s^beta built from the model's predicted norming
// (n, L_n, E[N(t)], or the counting-tail asymptote).
UniformCheckReport error_term_sup(const models::SumModel& model, const TransformGrid& grid,
                                  double lambda, double tolerance = 0.05);

// Anchors the quadrature stack on the exact family G_t(x) = c_t * x^alpha:
// the transform is integrated numerically and compared with
// Gamma(alpha+1) * c_t * s^(-alpha); alpha = 0 uses the integrated form
// int_0^{1/s} G_t(u) du against Gamma(alpha+2) * c_t * (1/s)^(alpha+1).
UniformCheckReport tauberian_identity_check(double alpha, const TransformGrid& grid,
                                            double tolerance = 1e-6);

struct SvipResult {
    bool found = false;
    double x_bar = 0.0;
    double t_bar = 0.0;
    // Supremum achieved at the witness, or the smallest achievable supremum
    // (largest grid corner) when no witness exists.
    double worst_gap = 0.0;
};

// Smallest grid pair (x_bar, t_bar) with
// sup_{grid x >= x_bar} |L_t(lambda_factor * x)/L_t(x) - 1| < eta for every
// grid t >= t_bar; scans x_bar first, then t_bar. family maps (t, x) to
// L_t(x) and must be evaluable pointwise; grids must be positive and
// increasing. Witnesses certify nothing beyond the supplied grids.
SvipResult svip_check(const std::function<double(double, double)>& family, double lambda_factor,
                      double eta, const std::vector<double>& x_grid,
                      const std::vector<double>& t_grid);

}  // namespace ldp::transforms
