#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ldp/errors.hpp"
#include "ldp/models.hpp"
#include "ldp/oracle.hpp"
#include "ldp/predict.hpp"
#include "ldp/specfun.hpp"

using namespace ldp;

constexpr double kPi = 3.14159265358979323846;

TEST_CASE("stopping constant hits its anchors and limits") {
    CHECK(predict::big_jump_constant(0.5, 0.5) == doctest::Approx(1.9257).epsilon(1e-4));
    const double independent = std::tgamma(0.5) * std::sqrt(std::tgamma(0.5)) / std::tgamma(0.75);
    CHECK(predict::big_jump_constant(0.5, 0.5) == doctest::Approx(independent).epsilon(1e-11));

    // Continuity towards the degenerate edges of the open square: the
    // constant tends to 1 as gamma vanishes and to Gamma(1-gamma) as the
    // increment tail index vanishes.
    CHECK(predict::big_jump_constant(1e-9, 0.5) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(predict::big_jump_constant(0.5, 1e-9) ==
          doctest::Approx(std::sqrt(kPi)).epsilon(1e-6));
    CHECK(predict::big_jump_constant(0.5, 0.5) > 1.0);
    CHECK_THROWS((void)predict::big_jump_constant(1.5, 0.5));
}

TEST_CASE("iid prediction is the one-big-jump tail") {
    const auto law = laws::IncrementLaw::pareto(0.7, 1.0);
    const auto p = predict::predict_iid(50, law, 1e5);
    CHECK(p.value == doctest::Approx(50.0 * std::pow(1e5, -0.7)).epsilon(1e-12));
    CHECK(p.ld_condition == doctest::Approx(p.value).epsilon(1e-12));
}

TEST_CASE("kernel prediction scales by the norming sum") {
    const auto law = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto kernel = kernels::MemoryKernel::algebraic(0.5);
    const auto p = predict::predict_kernel(kernel, 100, law, 1e8);
    const double L_n = kernels::ldp_norming(kernel, 100, 0.5).L_n;
    CHECK(p.value == doctest::Approx(L_n * 1e-4).epsilon(1e-12));
}

TEST_CASE("finite mean stopped prediction multiplies by the expected count") {
    const auto law = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto spec = counting::CountingSpec::poisson(2.0);
    const auto p = predict::predict_stopped_finite_mean(spec, 50.0, law, 1e6);
    CHECK(p.value == doctest::Approx(100.0 * 1e-3).epsilon(1e-12));
}

TEST_CASE("infinite mean stopped prediction carries the product constant") {
    const auto law = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto spec = counting::CountingSpec::first_passage(laws::BatchLaw::deterministic(1));
    const double x = 1e8;
    const auto p = predict::predict_stopped_infinite_mean(spec, 1.0, law, x);
    // C(1/2, 1/2) * q(1/tail(x)) with q(n) = n^{-1/2}/Gamma(1/2).
    const double expected = predict::big_jump_constant(0.5, 0.5) *
                            counting::tail_count_asymptotic(spec, 1.0, 1e4);
    CHECK(p.value == doctest::Approx(expected).epsilon(1e-12));

    // Homogeneity: thresholds x and 16x differ by 16^{gamma beta} = 2.
    const auto p16 = predict::predict_stopped_infinite_mean(spec, 1.0, law, 16.0 * x);
    CHECK(p.value / p16.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("first passage closed form equals the square-root identity") {
    // C(1/2, beta) * q(1/tail(x)) == sqrt(Gamma(1-beta) * tail(x)) / Gamma(1 - beta/2)
    // for the unit-cost first passage count, exercised across beta.
    const auto spec = counting::CountingSpec::first_passage(laws::BatchLaw::deterministic(1));
    for (double beta : {0.3, 0.5, 0.8}) {
        const auto law = laws::IncrementLaw::pareto(beta, 1.0);
        const double x = 3.7e7;
        const auto p = predict::predict_stopped_infinite_mean(spec, 1.0, law, x);
        const double tail = std::pow(x, -beta);
        const double rhs = std::sqrt(specfun::gamma_fn(1.0 - beta) * tail) /
                           specfun::gamma_fn(1.0 - beta / 2.0);
        CHECK(p.value == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("compound renewal example multipliers match the displayed constants") {
    const double t = 10.0;
    const double x = 1e8;

    const auto heavy = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto p_heavy = predict::predict_compound_renewal_example(1.0, 0.5, heavy, t, x);
    // rho t * |Gamma(-1/2)| Gamma(1/2)^{1/2} / (zeta(3/2) Gamma(3/4)) * x^{-1/4}.
    const double mult_heavy = std::abs(std::tgamma(-0.5)) * std::sqrt(std::tgamma(0.5)) /
                              (std::riemann_zeta(1.5) * std::tgamma(0.75));
    CHECK(mult_heavy == doctest::Approx(1.4742564202053114).epsilon(1e-9));
    CHECK(p_heavy.value ==
          doctest::Approx(10.0 * mult_heavy * std::pow(x, -0.25)).epsilon(1e-10));

    const auto light = laws::IncrementLaw::pareto(1.5, 1.0);
    const auto p_light = predict::predict_compound_renewal_example(1.0, 0.5, light, t, x);
    // rho t * mu^{1/2} / (gamma zeta(1+gamma)) * x^{-1/2} with mu = 3.
    const double mult_light = std::sqrt(3.0) / (0.5 * std::riemann_zeta(1.5));
    CHECK(mult_light == doctest::Approx(1.3260351797764603).epsilon(1e-9));
    CHECK(p_light.value ==
          doctest::Approx(10.0 * mult_light * std::pow(x, -0.5)).epsilon(1e-10));

    CHECK_THROWS((void)predict::predict_compound_renewal_example(1.0, 1.5, heavy, t, x));
}

TEST_CASE("prediction routing matches the per-model forms") {
    const auto heavy = laws::IncrementLaw::pareto(0.5, 1.0);
    const double x = 1e7;

    const auto iid = models::SumModel::iid(heavy, 50);
    CHECK(predict::predict_for(iid, x).value ==
          doctest::Approx(predict::predict_iid(50, heavy, x).value).epsilon(1e-13));

    const auto kernel = kernels::MemoryKernel::exponential(0.5);
    const auto weighted = models::SumModel::weighted(heavy, kernel, 50);
    CHECK(predict::predict_for(weighted, x).value ==
          doctest::Approx(predict::predict_kernel(kernel, 50, heavy, x).value).epsilon(1e-13));

    const auto stopped = models::SumModel::stopped(
        heavy, counting::CountingSpec::poisson(2.0), 50.0);
    CHECK(predict::predict_for(stopped, x).value ==
          doctest::Approx(
              predict::predict_stopped_finite_mean(stopped.counting, 50.0, heavy, x).value)
              .epsilon(1e-13));

    const auto fp = models::SumModel::stopped(
        heavy, counting::CountingSpec::first_passage(laws::BatchLaw::deterministic(1)), 1.0);
    CHECK(predict::predict_for(fp, x).value ==
          doctest::Approx(
              predict::predict_stopped_infinite_mean(fp.counting, 1.0, heavy, x).value)
              .epsilon(1e-13));
}

TEST_CASE("level solving inverts the ld condition") {
    const auto heavy = laws::IncrementLaw::pareto(0.7, 1.0);
    const auto iid = models::SumModel::iid(heavy, 50);
    const double x = predict::level_for_ld(iid, 0.02);
    CHECK(models::ld_condition(iid, x) == doctest::Approx(0.02).epsilon(1e-9));

    const auto fp = models::SumModel::stopped(
        laws::IncrementLaw::pareto(0.5, 1.0),
        counting::CountingSpec::first_passage(laws::BatchLaw::deterministic(1)), 1.0);
    const double xf = predict::level_for_ld(fp, 0.01);
    CHECK(models::ld_condition(fp, xf) == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("deep prediction approaches the two-fold oracle as x grows") {
    const auto law = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto model = models::SumModel::iid(law, 2);
    double prev_gap = 1e9;
    for (double x : {1e2, 1e4, 1e6}) {
        const auto pred = predict::predict_for(model, x);
        const auto exact = oracle::convolution_tail(law, 2, x);
        const double gap = std::abs(pred.value / exact.value - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 2e-3);
}
