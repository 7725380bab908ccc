#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldp/counting.hpp"
#include "ldp/kernels.hpp"
#include "ldp/laws.hpp"
#include "ldp/rng.hpp"

namespace ldp::models {

enum class ModelKind { iid, weighted, stopped };

struct SumModel {
    ModelKind kind = ModelKind::iid;
    laws::IncrementLaw law;
    std::uint64_t n = 1;             // iid and weighted horizon
    kernels::MemoryKernel kernel;    // weighted only
    counting::CountingSpec counting; // stopped only
    double t = 1.0;                  // stopped only
    bool force_uncentered = false;

    static SumModel iid(laws::IncrementLaw law, std::uint64_t n);
    static SumModel weighted(laws::IncrementLaw law, kernels::MemoryKernel kernel,
                             std::uint64_t n);
    static SumModel stopped(laws::IncrementLaw law, counting::CountingSpec counting, double t);

    std::string describe() const;
};

struct Replication {
    double z = 0.0;            // centered sum
    std::uint64_t n_used = 0;  // increments consumed
    bool capped = false;
    std::uint64_t work = 0;    // increment draws, the unit of the work budget
};

enum class CenteringRule { zero, deterministic_mean, random_mean };

CenteringRule centering_rule(const SumModel& model);

// Deterministic centering constant (0 under zero centering; n*mu or
// mu*sum(w_j) under deterministic_mean; per-replication under random_mean,
// where this returns 0 and sampling subtracts N*mu itself).
double centering_constant(const SumModel& model);

// Tail index beta of the increment law; requires a regularly varying law.
double tail_index(const SumModel& model);

Replication sample_centered(const SumModel& model, mc::RandomStream& rng,
                            std::uint64_t cap = counting::kDefaultCountCap);

// Scalar large-deviation regime diagnostic at level x: n*tail(x) for iid,
// L_n*tail(x) for weighted, E[N]*tail(x) for finite-mean stopped, and the
// counting tail at the event threshold for infinite-mean stopped models.
double ld_condition(const SumModel& model, double x);

// True when the stopped counting law has infinite mean (selects the
// counting-dominated asymptotic route).
bool counting_mean_is_infinite(const SumModel& model);

// Reusable sampling state with weights, tables, and centering resolved once.
class PreparedModel {
public:
    explicit PreparedModel(const SumModel& model, std::uint64_t cap = counting::kDefaultCountCap);
    Replication operator()(mc::RandomStream& rng) const;
    const SumModel& model() const { return model_; }
    std::uint64_t cap() const { return cap_; }

private:
    SumModel model_;
    std::uint64_t cap_ = counting::kDefaultCountCap;
    laws::FastSampler sampler_;
    CenteringRule rule_ = CenteringRule::zero;
    double mu_ = 0.0;
    double fixed_center_ = 0.0;
    std::vector<double> weights_;
};

}  // namespace ldp::models
