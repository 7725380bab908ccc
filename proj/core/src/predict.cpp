#include "ldp/predict.hpp"

#include <cmath>
#include <stdexcept>

#include "ldp/errors.hpp"
#include "ldp/specfun.hpp"

namespace ldp::predict {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

void flag_regime(Prediction& p) {
    if (p.ld_condition >= 1.0) {
        if (!p.validity_note.empty()) p.validity_note += "; ";
        p.validity_note += "invalid: ld_condition >= 1";
    }
}

}  // namespace

double big_jump_constant(double gamma, double beta) {
    require(gamma > 0.0 && gamma < 1.0, "big_jump_constant: gamma must lie in (0,1)");
    require(beta > 0.0 && beta < 1.0, "big_jump_constant: beta must lie in (0,1)");
    return specfun::gamma_fn(1.0 - gamma) *
           std::pow(specfun::gamma_fn(1.0 - beta), gamma) /
           specfun::gamma_fn(1.0 - gamma * beta);
}

Prediction predict_iid(std::uint64_t n, const laws::IncrementLaw& law, double x) {
    require(n >= 1, "predict_iid: n must be >= 1");
    const auto asym = laws::lst_asymptotic(law);
    Prediction p;
    p.value = double(n) * laws::tail(law, x);
    p.formula_id = "iid_big_jump";
    p.ld_condition = p.value;
    p.validity_note = asym.index > 1.0 ? "mean-centered sum" : "uncentered sum";
    flag_regime(p);
    return p;
}

Prediction predict_kernel(const kernels::MemoryKernel& kernel, std::uint64_t n,
                          const laws::IncrementLaw& law, double x) {
    const auto asym = laws::lst_asymptotic(law);
    const auto norming = kernels::ldp_norming(kernel, n, asym.index);
    Prediction p;
    p.value = norming.L_n * laws::tail(law, x);
    p.formula_id = "kernel_big_jump";
    p.ld_condition = p.value;
    p.validity_note = asym.index > 1.0 ? "mean-centered sum" : "uncentered sum";
    flag_regime(p);
    return p;
}

Prediction predict_stopped_finite_mean(const counting::CountingSpec& spec, double t,
                                       const laws::IncrementLaw& law, double x) {
    const auto mean = counting::mean_count(spec, t);
    if (!mean.finite)
        throw UnsupportedError("predict_stopped_finite_mean: counting mean is infinite; use the "
                               "infinite-mean predictor");
    Prediction p;
    p.value = mean.value * laws::tail(law, x);
    p.formula_id = "stopped_finite_mean";
    p.ld_condition = p.value;
    p.validity_note = mean.exact ? "exact mean count" : "approximate mean count";
    flag_regime(p);
    return p;
}

Prediction predict_stopped_infinite_mean(const counting::CountingSpec& spec, double t,
                                         const laws::IncrementLaw& law, double x) {
    const auto mean = counting::mean_count(spec, t);
    if (mean.finite)
        throw UnsupportedError("predict_stopped_infinite_mean: counting mean is finite; use the "
                               "finite-mean predictor");
    const auto count_asym = counting::count_tail_asymptote(spec, t);
    const auto law_asym = laws::lst_asymptotic(law);
    Prediction p;
    if (law_asym.index < 1.0) {
        const double threshold = std::max(1.0, 1.0 / laws::tail(law, x));
        p.value = big_jump_constant(count_asym.gamma, law_asym.index) *
                  counting::tail_count_asymptotic(spec, t, threshold);
        p.formula_id = "stopped_infinite_mean";
        p.validity_note = "counting-dominated route";
    } else {
        const double threshold = std::max(1.0, x / laws::mean(law));
        p.value = counting::tail_count_asymptotic(spec, t, threshold);
        p.formula_id = "stopped_lln";
        p.validity_note = "law-of-large-numbers route";
    }
    p.ld_condition = counting::tail_count_asymptotic(
        spec, t,
        std::max(1.0, law_asym.index < 1.0 ? 1.0 / laws::tail(law, x) : x / laws::mean(law)));
    flag_regime(p);
    return p;
}

Prediction predict_compound_renewal_example(double rho, double gamma,
                                            const laws::IncrementLaw& law, double t, double x) {
    require(rho > 0.0, "compound renewal example: rho must be positive");
    require(gamma > 0.0 && gamma < 1.0, "compound renewal example: gamma must lie in (0,1)");
    require(t > 0.0, "compound renewal example: t must be positive");
    if (law.kind != laws::LawKind::pareto)
        throw UnsupportedError("compound renewal example: closed form pinned to pareto increments");
    const double zeta_s = specfun::riemann_zeta(1.0 + gamma);
    const double gamma_neg = specfun::gamma_fn(1.0 - gamma) / gamma;  // |Gamma(-gamma)|
    const auto spec = counting::CountingSpec::compound_poisson(rho, laws::BatchLaw::zeta(gamma));
    Prediction p;
    if (law.beta < 1.0) {
        const double tail_x = laws::tail(law, x);
        p.value = rho * t * gamma_neg *
                  std::pow(specfun::gamma_fn(1.0 - law.beta), gamma) /
                  (zeta_s * specfun::gamma_fn(1.0 - gamma * law.beta)) * std::pow(tail_x, gamma);
        p.ld_condition = counting::tail_count_asymptotic(spec, t, std::max(1.0, 1.0 / tail_x));
    } else {
        const double mu = laws::mean(law);
        p.value = rho * t * std::pow(mu, gamma) / (gamma * zeta_s) * std::pow(x, -gamma);
        p.ld_condition =
            counting::tail_count_asymptotic(spec, t, std::max(1.0, x / mu));
    }
    p.formula_id = "compound_renewal_closed_form";
    p.validity_note = law.beta < 1.0 ? "counting-dominated route" : "law-of-large-numbers route";
    flag_regime(p);
    return p;
}

Prediction predict_for(const models::SumModel& model, double x) {
    switch (model.kind) {
        case models::ModelKind::iid:
            return predict_iid(model.n, model.law, x);
        case models::ModelKind::weighted:
            return predict_kernel(model.kernel, model.n, model.law, x);
        case models::ModelKind::stopped: {
            if (counting::mean_count(model.counting, model.t).finite)
                return predict_stopped_finite_mean(model.counting, model.t, model.law, x);
            return predict_stopped_infinite_mean(model.counting, model.t, model.law, x);
        }
    }
    throw std::logic_error("predict_for: unknown model kind");
}

double level_for_ld(const models::SumModel& model, double target) {
    require(target > 0.0 && target < 1.0, "level_for_ld: target must lie in (0,1)");
    switch (model.kind) {
        case models::ModelKind::iid:
            return laws::tail_inverse(model.law, target / double(model.n));
        case models::ModelKind::weighted: {
            const auto asym = laws::lst_asymptotic(model.law);
            const auto norming = kernels::ldp_norming(model.kernel, model.n, asym.index);
            return laws::tail_inverse(model.law, target / norming.L_n);
        }
        case models::ModelKind::stopped: {
            const auto mean = counting::mean_count(model.counting, model.t);
            if (mean.finite) return laws::tail_inverse(model.law, target / mean.value);
            const auto count_asym = counting::count_tail_asymptote(model.counting, model.t);
            const double threshold =
                std::pow(count_asym.C_t /
                             (target * specfun::gamma_fn(1.0 - count_asym.gamma)),
                         1.0 / count_asym.gamma);
            const auto law_asym = laws::lst_asymptotic(model.law);
            if (law_asym.index < 1.0) return laws::tail_inverse(model.law, 1.0 / threshold);
            return laws::mean(model.law) * threshold;
        }
    }
    throw std::logic_error("level_for_ld: unknown model kind");
}

}  // namespace ldp::predict
