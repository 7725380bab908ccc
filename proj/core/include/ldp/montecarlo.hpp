#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ldp/models.hpp"
#include "ldp/rng.hpp"

namespace ldp::mc {

struct TailEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t replications = 0;
    std::string method = "naive";
    double capped_fraction = 0.0;
    double mean_work = 0.0;
};

// Fraction of replications with centred sum above x, with binomial standard
// error. Replication i always uses seeds.stream_for(i); partial sums are
// reduced in fixed block order, so the result is bit-identical for any
// worker count. budget must be at least 1000.
TailEstimate estimate_tail(const models::SumModel& model, double x, std::uint64_t budget,
                           const SeedSpec& seeds, std::uint64_t cap = counting::kDefaultCountCap,
                           int workers = 1);

// Importance-sampled tail estimate for iid models: draws from the defensive
// mixture (1-mix_p) f^n + mix_p (1/n) sum_j [f | X_j > x/2] f^(n-1) and
// averages likelihood-ratio-weighted indicators. Unbiased for the same tail
// probability as estimate_tail; mix_p must lie in (0, 1).
TailEstimate estimate_tail_bigjump_is(const models::SumModel& model, double x,
                                      std::uint64_t budget, const SeedSpec& seeds,
                                      double mix_p = 0.5, int workers = 1);

// Likelihood-ratio weight of one mixture draw given the count of increments
// above the boost threshold; exposed so tests can enumerate the estimator's
// expectation exactly on discrete toy laws.
double bigjump_is_weight(std::uint64_t n, std::uint64_t count_above, double tail_at_threshold,
                         double mix_p);

enum class Method { naive, bigjump_is };

struct ConvergenceRow {
    double index = 0.0;
    double x = 0.0;
    double p_hat = 0.0;
    double std_error = 0.0;
    double prediction = 0.0;
    double ratio = 0.0;
    double ld_condition = 0.0;
    std::string method = "naive";
    std::uint64_t replications = 0;
    double capped_fraction = 0.0;
    double wall_ms = 0.0;
};

// Expected increment draws for one replication (n for iid and weighted
// models, E[min(N(t), cap)] for stopped models).
double expected_work_per_replication(const models::SumModel& model, std::uint64_t cap);

// Throws OutOfRegimeError when a single replication's expected work exceeds
// 64 * budget, or when an infinite-mean stopped model's event count scale
// exceeds cap / 100 (the cap would visibly bias the estimate).
void check_run_feasible(const models::SumModel& model, double x, std::uint64_t budget,
                        std::uint64_t cap);

// One estimator-versus-prediction row per index. Refuses (OutOfRegimeError)
// any index where ld_condition exceeds 0.05 or check_run_feasible fails.
std::vector<ConvergenceRow> convergence_table(
    const std::function<models::SumModel(double)>& model_family,
    const std::function<double(double)>& x_rule, const std::vector<double>& indices,
    std::uint64_t budget, const SeedSpec& seeds,
    std::uint64_t cap = counting::kDefaultCountCap, Method method = Method::naive,
    int workers = 1, double mix_p = 0.5);

}  // namespace ldp::mc
