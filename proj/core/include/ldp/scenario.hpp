#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldp/models.hpp"
#include "ldp/montecarlo.hpp"

namespace ldp::scenario {

enum class Check { mc_vs_prediction, error_term, svip, scaling };

enum class XRuleKind { target_ld, fixed, list };

struct Scenario {
    std::string name;
    models::SumModel model;  // horizon (n or t) is substituted per grid value
    std::vector<double> grid;
    XRuleKind x_kind = XRuleKind::target_ld;
    double x_value = 0.02;
    std::vector<double> x_list;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
    std::uint64_t cap = counting::kDefaultCountCap;
    int workers = 1;
    mc::Method method = mc::Method::naive;
    double mix_p = 0.5;
    double tolerance = 0.2;
    std::vector<Check> checks = {Check::mc_vs_prediction};
    double s_coeff = 0.0;  // error_term s-rule s_t = s_coeff * t^(-s_exponent)
    double s_exponent = 0.0;
    std::vector<double> lambda_values = {1.0, 7.0};
    std::string svip_family = "log";  // constant | log | nonuniform
    double svip_lambda = 2.0;
    double svip_eta = 0.01;
    std::string out;  // defaults to <name>.csv
};

// Parses a line-oriented `key = value` document with `#` comments. Throws
// std::invalid_argument naming the line and key for unknown keys, duplicate
// keys, malformed literals, and out-of-range parameters.
Scenario parse_scenario(const std::string& text);

// Standalone literal parsers for the same value grammar the scenario keys
// use, e.g. "pareto(0.5, 1)" or "compound_poisson(1, zeta(0.5))".
laws::IncrementLaw parse_law(const std::string& text);
counting::CountingSpec parse_counting(const std::string& text);

Scenario load_scenario_file(const std::string& path);

// Fully resolved `key = value` lines, defaults included.
std::vector<std::string> describe(const Scenario& scenario);

}  // namespace ldp::scenario
