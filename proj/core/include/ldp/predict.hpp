#pragma once

#include <cstdint>
#include <string>

#include "ldp/counting.hpp"
#include "ldp/kernels.hpp"
#include "ldp/laws.hpp"
#include "ldp/models.hpp"

namespace ldp::predict {

struct Prediction {
    double value = 0.0;
    std::string formula_id;
    double ld_condition = 0.0;
    std::string validity_note;
};

// Gamma(1-gamma) * Gamma(1-beta)^gamma / Gamma(1-gamma*beta) for
// gamma, beta in (0,1); equals 1 when either argument tends to 0 or 1
// within the open square.
double big_jump_constant(double gamma, double beta);

Prediction predict_iid(std::uint64_t n, const laws::IncrementLaw& law, double x);

Prediction predict_kernel(const kernels::MemoryKernel& kernel, std::uint64_t n,
                          const laws::IncrementLaw& law, double x);

Prediction predict_stopped_finite_mean(const counting::CountingSpec& spec, double t,
                                       const laws::IncrementLaw& law, double x);

Prediction predict_stopped_infinite_mean(const counting::CountingSpec& spec, double t,
                                         const laws::IncrementLaw& law, double x);

// Closed form for the compound renewal worked example: poisson(rho) base
// with zeta(gamma) batches and a pareto-type increment law.
Prediction predict_compound_renewal_example(double rho, double gamma,
                                            const laws::IncrementLaw& law, double t, double x);

// Routes to the matching predictor for a model.
Prediction predict_for(const models::SumModel& model, double x);

// Level x with ld_condition(model at index, x) == target, solved through the
// increment law's tail inverse.
double level_for_ld(const models::SumModel& model, double target);

}  // namespace ldp::predict
