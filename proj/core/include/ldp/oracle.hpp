#pragma once

#include <cstdint>
#include <vector>

#include "ldp/counting.hpp"
#include "ldp/laws.hpp"

namespace ldp::oracle {

enum class OracleMethod { quadrature, enumeration, simulation };

struct OracleResult {
    double value = 0.0;
    double error_bound = 0.0;
    OracleMethod method = OracleMethod::quadrature;
};

// P[X_1 + ... + X_n > x] for n in {2, 3} by direct density convolution;
// needs a law with a closed-form density (pareto, pareto_log, exponential).
OracleResult convolution_tail(const laws::IncrementLaw& law, int n, double x);

// Partial sum of E[z^N(t)] over n <= n_max plus a certified remainder bound
// z^n_max * P[N > n_max].
OracleResult enumerate_pgf(const counting::CountingSpec& spec, double t, double z,
                           std::uint64_t n_max);

struct WalkTailRow {
    std::uint64_t n = 0;
    double empirical = 0.0;
    double exact = 0.0;
    double stderr_ = 0.0;
};

// Simulates gaussian random walks and tallies the first strictly positive
// partial sum against the closed-form survival sequence.
std::vector<WalkTailRow> first_passage_walk(std::uint64_t walks, std::uint64_t n_max,
                                            std::uint64_t seed);

}  // namespace ldp::oracle
