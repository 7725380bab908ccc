#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ldp/counting.hpp"
#include "ldp/kernels.hpp"
#include "ldp/laws.hpp"
#include "ldp/models.hpp"
#include "ldp/specfun.hpp"
#include "ldp/transforms.hpp"

using namespace ldp;

namespace {

transforms::TransformGrid power_grid(std::vector<double> t_values, double exponent,
                                     std::size_t subgrid = 41) {
    transforms::TransformGrid grid;
    grid.t_values = std::move(t_values);
    grid.s_rule = [exponent](double t) { return std::pow(t, -exponent); };
    grid.s_subgrid_size = subgrid;
    return grid;
}

}  // namespace

TEST_CASE("grid validation rejects malformed inputs") {
    auto good = power_grid({10.0, 100.0}, 3.0);
    CHECK_NOTHROW(transforms::validate(good));

    auto empty = good;
    empty.t_values.clear();
    CHECK_THROWS_AS(transforms::validate(empty), std::invalid_argument);

    auto unsorted = good;
    unsorted.t_values = {100.0, 10.0};
    CHECK_THROWS_AS(transforms::validate(unsorted), std::invalid_argument);

    auto rising_s = good;
    rising_s.s_rule = [](double t) { return t; };
    CHECK_THROWS_AS(transforms::validate(rising_s), std::invalid_argument);

    auto bad_lambda = good;
    bad_lambda.lambda_values = {1.0, -2.0};
    CHECK_THROWS_AS(transforms::validate(bad_lambda), std::invalid_argument);

    auto tiny_subgrid = good;
    tiny_subgrid.s_subgrid_size = 1;
    CHECK_THROWS_AS(transforms::validate(tiny_subgrid), std::invalid_argument);

    auto no_rule = good;
    no_rule.s_rule = nullptr;
    CHECK_THROWS_AS(transforms::validate(no_rule), std::invalid_argument);
}

TEST_CASE("uniform pass rule keys on the tail of the suprema sequence") {
    CHECK(transforms::uniform_pass({0.1, 0.05, 0.02}, 0.05));
    CHECK(transforms::uniform_pass({0.04}, 0.05));
    CHECK_FALSE(transforms::uniform_pass({}, 0.05));
    CHECK_FALSE(transforms::uniform_pass({0.01, 0.02, 0.03}, 0.05));
    CHECK_FALSE(transforms::uniform_pass({0.02, 0.01, 0.06}, 0.05));
    // Rises within the float slack of tolerance/100 are forgiven.
    CHECK(transforms::uniform_pass({0.0300, 0.0302, 0.0301}, 0.05));
    CHECK_FALSE(transforms::uniform_pass({0.0300, 0.0310, 0.0301}, 0.05));
    // Early history is ignored once the last three behave.
    CHECK(transforms::uniform_pass({0.0, 9.0, 0.5, 0.2, 0.04}, 0.05));
}

TEST_CASE("model horizon replacement routes by model kind") {
    const auto law = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto iid = models::SumModel::iid(law, 7);
    CHECK(transforms::model_at_index(iid, 250.0).n == 250);
    CHECK(transforms::model_at_index(iid, 250.0 + 1e-9).n == 250);
    CHECK_THROWS_AS((void)transforms::model_at_index(iid, 2.5), std::invalid_argument);
    CHECK_THROWS_AS((void)transforms::model_at_index(iid, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)transforms::model_at_index(iid, 1e16), std::invalid_argument);

    const auto stopped =
        models::SumModel::stopped(law, counting::CountingSpec::poisson(2.0), 50.0);
    CHECK(transforms::model_at_index(stopped, 12.5).t == doctest::Approx(12.5));
    CHECK_THROWS_AS((void)transforms::model_at_index(stopped, -1.0), std::invalid_argument);
}

TEST_CASE("centred sum transform composes the increment transform in closed form") {
    const double s = 0.01;

    const auto heavy = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto iid = models::SumModel::iid(heavy, 5);
    CHECK(transforms::lst_centered_sum(iid, s) ==
          doctest::Approx(std::pow(laws::lst(heavy, s).value, 5)).epsilon(1e-12));

    const auto kernel = kernels::MemoryKernel::exponential(0.5);
    const auto weighted = models::SumModel::weighted(heavy, kernel, 3);
    const double product = laws::lst(heavy, 1.0 * s).value * laws::lst(heavy, 1.5 * s).value *
                           laws::lst(heavy, 1.75 * s).value;
    CHECK(transforms::lst_centered_sum(weighted, s) ==
          doctest::Approx(product).epsilon(1e-12));

    const auto spec = counting::CountingSpec::poisson(2.0);
    const auto stopped = models::SumModel::stopped(heavy, spec, 5.0);
    CHECK(transforms::lst_centered_sum(stopped, s) ==
          doctest::Approx(counting::pgf(spec, 5.0, laws::lst(heavy, s).value)).epsilon(1e-12));

    const auto light = laws::IncrementLaw::pareto(1.5, 1.0);
    const auto centered = models::SumModel::iid(light, 4);
    CHECK(transforms::lst_centered_sum(centered, s) ==
          doctest::Approx(std::exp(4.0 * s * 3.0) * std::pow(laws::lst(light, s).value, 4))
              .epsilon(1e-9));

    CHECK_THROWS_AS((void)transforms::lst_centered_sum(iid, 0.0), std::invalid_argument);
}

TEST_CASE("one-minus form keeps relative accuracy at tiny s") {
    const auto heavy = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto iid = models::SumModel::iid(heavy, 10);
    const double s = 1e-12;
    const double one_minus = transforms::lst_centered_sum_one_minus(iid, s);
    const double lead = 10.0 * specfun::gamma_fn(0.5) * std::sqrt(s);
    CHECK(one_minus == doctest::Approx(lead).epsilon(1e-4));
    CHECK(one_minus > 0.0);
    CHECK(transforms::lst_centered_sum(iid, s) < 1.0);
}

TEST_CASE("transform approaches one from the matching side as s shrinks") {
    const auto heavy = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto uncentered = models::SumModel::iid(heavy, 2);
    double prev = -1.0;
    for (double s : {1e-4, 1e-6, 1e-8}) {
        const double v = transforms::lst_centered_sum(uncentered, s);
        CHECK(v < 1.0);
        CHECK(v > prev);
        prev = v;
    }

    const auto light = laws::IncrementLaw::pareto(1.5, 1.0);
    const auto centered = models::SumModel::iid(light, 2);
    prev = 1e9;
    for (double s : {1e-4, 1e-6, 1e-8}) {
        const double v = transforms::lst_centered_sum(centered, s);
        CHECK(v > 1.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("error term supremum decays for an iid family under a shrinking s rule") {
    const auto heavy = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto family = models::SumModel::iid(heavy, 10);
    const auto grid = power_grid({10.0, 100.0, 1000.0, 10000.0}, 3.0);

    for (double lambda : {1.0, 7.0}) {
        const auto report = transforms::error_term_sup(family, grid, lambda);
        REQUIRE(report.suprema.size() == 4);
        CHECK(report.passed);
        CHECK(report.tolerance == doctest::Approx(0.05));
        for (std::size_t i = 0; i + 1 < report.suprema.size(); ++i)
            CHECK(report.suprema[i + 1] < report.suprema[i]);
        CHECK(report.suprema.back() < 0.05);
        CHECK(transforms::uniform_pass(report.suprema, report.tolerance) == report.passed);
    }

    // Larger lambda pushes the inspection window towards coarser s and can
    // only raise each supremum.
    const auto lam1 = transforms::error_term_sup(family, grid, 1.0);
    const auto lam7 = transforms::error_term_sup(family, grid, 7.0);
    for (std::size_t i = 0; i < lam1.suprema.size(); ++i)
        CHECK(lam7.suprema[i] > lam1.suprema[i]);
}

TEST_CASE("error term supremum stays order one on the regime boundary") {
    // s_t = t^{-2} keeps n * tail(1/s) constant for tail index one half, so
    // the remainder never becomes uniformly small.
    const auto heavy = laws::IncrementLaw::pareto(0.5, 1.0);
    const auto family = models::SumModel::iid(heavy, 10);
    const auto grid = power_grid({10.0, 100.0, 1000.0, 10000.0}, 2.0);
    const auto report = transforms::error_term_sup(family, grid, 1.0);
    CHECK_FALSE(report.passed);
    for (double sup : report.suprema) CHECK(sup > 0.1);
}

TEST_CASE("error term supremum covers weighted and stopped normings") {
    const auto heavy = laws::IncrementLaw::pareto(0.5, 1.0);

    const auto weighted =
        models::SumModel::weighted(heavy, kernels::MemoryKernel::algebraic(0.5), 10);
    const auto wreport =
        transforms::error_term_sup(weighted, power_grid({100.0, 1000.0, 10000.0}, 3.0), 1.0);
    REQUIRE(wreport.suprema.size() == 3);
    CHECK(wreport.suprema[1] < wreport.suprema[0]);
    CHECK(wreport.suprema[2] < wreport.suprema[1]);
    CHECK(wreport.suprema[2] < 0.1);

    const auto stopped =
        models::SumModel::stopped(heavy, counting::CountingSpec::poisson(2.0), 1.0);
    const auto sreport =
        transforms::error_term_sup(stopped, power_grid({100.0, 1000.0}, 3.0), 1.0);
    REQUIRE(sreport.suprema.size() == 2);
    CHECK(sreport.suprema[1] < sreport.suprema[0]);
    CHECK(sreport.suprema[1] < 0.1);

    CHECK_THROWS_AS((void)transforms::error_term_sup(
                        weighted, power_grid({100.0, 1000.0}, 3.0), 0.0),
                    std::invalid_argument);
}

TEST_CASE("pure power families satisfy the transform identity") {
    const auto grid = power_grid({1.0, 4.0, 16.0}, 1.0, 13);
    for (double alpha : {0.0, 0.3, 0.5, 1.0, 1.5}) {
        const auto report = transforms::tauberian_identity_check(alpha, grid);
        CHECK(report.passed);
        CHECK(report.suprema.size() == 3);
        for (double sup : report.suprema) CHECK(sup <= 1e-6);
    }
    CHECK_THROWS_AS((void)transforms::tauberian_identity_check(-0.5, grid),
                    std::invalid_argument);
}

namespace {

std::vector<double> decades(int lo, int hi, int step = 1) {
    std::vector<double> out;
    for (int e = lo; e <= hi; e += step) out.push_back(std::pow(10.0, e));
    return out;
}

}  // namespace

TEST_CASE("slow variation witness search accepts uniform families") {
    const auto x_grid = decades(1, 36);
    const auto t_grid = decades(0, 40, 4);

    const auto constant = [](double t, double) { return 1.0 + 1.0 / t; };
    const auto rc = transforms::svip_check(constant, 2.0, 0.01, x_grid, t_grid);
    CHECK(rc.found);
    CHECK(rc.x_bar == doctest::Approx(x_grid.front()));
    CHECK(rc.t_bar == doctest::Approx(t_grid.front()));
    CHECK(rc.worst_gap == doctest::Approx(0.0).epsilon(1e-12));

    const auto logfam = [](double t, double x) { return (1.0 + 1.0 / t) * std::log(x); };
    const auto rl = transforms::svip_check(logfam, 2.0, 0.01, x_grid, t_grid);
    CHECK(rl.found);
    CHECK(rl.x_bar == doctest::Approx(1e31).epsilon(1e-10));
    CHECK(rl.worst_gap < 0.01);
    CHECK(rl.worst_gap > 0.005);
}

TEST_CASE("slow variation witness search rejects a horizon-coupled family") {
    const auto x_grid = decades(1, 36);
    const auto t_grid = decades(0, 40, 4);
    const auto coupled = [](double t, double x) { return 1.0 + t / x; };
    const auto r = transforms::svip_check(coupled, 2.0, 0.01, x_grid, t_grid);
    CHECK_FALSE(r.found);
    CHECK(r.worst_gap == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("slow variation witness search validates its inputs") {
    const std::vector<double> good = {1.0, 2.0, 4.0};
    const auto fam = [](double, double) { return 1.0; };
    CHECK_THROWS_AS((void)transforms::svip_check(fam, 2.0, 0.01, {}, good),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)transforms::svip_check(fam, 2.0, 0.01, {2.0, 1.0}, good),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)transforms::svip_check(fam, 2.0, 0.0, good, good),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)transforms::svip_check(fam, -1.0, 0.01, good, good),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)transforms::svip_check(nullptr, 2.0, 0.01, good, good),
                    std::invalid_argument);
}
