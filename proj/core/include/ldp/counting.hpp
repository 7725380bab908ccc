#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "ldp/laws.hpp"
#include "ldp/rng.hpp"

namespace ldp::counting {

// Time-dependent scalar parameter rho(t) = coeff * t^exponent.
struct GrowthRule {
    double coeff = 1.0;
    double exponent = 1.0;

    static GrowthRule linear() { return {1.0, 1.0}; }
    static GrowthRule constant(double c) { return {c, 0.0}; }
    static GrowthRule power(double coeff, double exponent) { return {coeff, exponent}; }

    double operator()(double t) const;
    std::string describe() const;
};

enum class CountKind {
    poisson,
    geometric,
    renewal,
    compound_renewal,
    first_passage,
    two_point,
    deterministic,
};

struct CountingSpec {
    CountKind kind = CountKind::poisson;
    double rho = 1.0;                          // poisson intensity
    GrowthRule rho_of_t = GrowthRule::linear();  // geometric mean, two_point scale
    laws::IncrementLaw waiting;                // renewal waiting times
    std::shared_ptr<const CountingSpec> base;  // compound_renewal base process
    laws::BatchLaw batch;                      // compound batches, first_passage costs
    double gamma = 1.5;                        // two_point moment exponent
    std::uint64_t fixed_n = 1;                 // deterministic count

    static CountingSpec poisson(double rho);
    static CountingSpec geometric(GrowthRule rho_of_t);
    static CountingSpec renewal(laws::IncrementLaw waiting);
    static CountingSpec compound(CountingSpec base, laws::BatchLaw batch);
    static CountingSpec compound_poisson(double rho, laws::BatchLaw batch);
    static CountingSpec first_passage(laws::BatchLaw cost);
    static CountingSpec two_point(GrowthRule rho_of_t, double gamma);
    static CountingSpec deterministic(std::uint64_t n);

    std::string describe() const;
};

struct CountSample {
    std::uint64_t n = 0;
    bool capped = false;
    std::uint64_t cap = 0;
};

struct MeanCount {
    double value = 0.0;
    bool finite = true;
    bool exact = true;
};

// Leading tail behaviour P[N(t) > n] ~ C_t * n^(-gamma) / Gamma(1 - gamma)
// for infinite-mean counting families with gamma in (0, 1).
struct CountTailAsymptote {
    double gamma = 0.5;
    double C_t = 1.0;
};

inline constexpr std::uint64_t kDefaultCountCap = 1ull << 26;

CountSample sample_count(const CountingSpec& spec, double t, std::uint64_t cap,
                         mc::RandomStream& rng);

// Probability generating function E[z^N(t)] where a closed form exists
// (everything except the renewal kind). z must lie inside the radius.
double pgf(const CountingSpec& spec, double t, double z);

// 1 - pgf(1 + a) at full relative accuracy for a in (-1, 0].
double pgf_one_minus(const CountingSpec& spec, double t, double a);

MeanCount mean_count(const CountingSpec& spec, double t);

CountTailAsymptote count_tail_asymptote(const CountingSpec& spec, double t);

// C_t * n^(-gamma)/Gamma(1-gamma) for a real-valued threshold n >= 1. The
// threshold is real, not integer: predictor homogeneity in x requires
// evaluating at exact non-integer points such as 1/tail(x).
double tail_count_asymptotic(const CountingSpec& spec, double t, double n);

// E[min(N(t), cap)], used for work-budget estimates; exact where the mean
// is exact and the cap unlikely, asymptotics-based otherwise.
double mean_count_capped(const CountingSpec& spec, double t, std::uint64_t cap);

// Exact q-th moment for discrete-support counts (two_point, deterministic).
double exact_moment(const CountingSpec& spec, double t, int q);

// Survival q_n = P[tau > n] of the driving walk's first passage time:
// exact recurrence up to the table size, asymptotic expansion beyond.
double first_passage_survival(std::uint64_t n);
std::uint64_t first_passage_table_size();

}  // namespace ldp::counting
