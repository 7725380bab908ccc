#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>

#include "ldp/rng.hpp"

namespace ldp::laws {

enum class LawKind { pareto, pareto_log, one_sided_stable, exponential, gaussian_step };

struct IncrementLaw {
    LawKind kind = LawKind::pareto;
    double beta = 0.5;          // tail index (pareto, pareto_log)
    double scale = 1.0;         // support minimum (pareto, pareto_log)
    double log_exponent = 0.0;  // pareto_log slowly varying exponent, <= beta
    double alpha = 0.5;         // one_sided_stable index in (0, 1)
    double rate = 1.0;          // exponential rate

    static IncrementLaw pareto(double beta, double scale);
    static IncrementLaw pareto_log(double beta, double scale, double log_exponent);
    static IncrementLaw one_sided_stable(double alpha);
    static IncrementLaw exponential(double rate);
    static IncrementLaw gaussian_step();

    std::string describe() const;
};

enum class TransformMethod { closed_form, series, quadrature };

struct TransformValue {
    double s = 0.0;
    double value = 0.0;
    TransformMethod method = TransformMethod::closed_form;
};

// Leading tail behaviour tail(x) ~ coeff * x^(-index) (up to slowly varying
// corrections for pareto_log).
struct TailAsymptote {
    double index = 0.0;
    double coeff = 0.0;
};

double sample(const IncrementLaw& law, mc::RandomStream& rng);
double tail(const IncrementLaw& law, double x);
double cdf(const IncrementLaw& law, double x);
// Smallest x with tail(x) <= p, p in (0, 1).
double tail_inverse(const IncrementLaw& law, double p);
bool has_finite_mean(const IncrementLaw& law);
double mean(const IncrementLaw& law);  // throws UnsupportedError when infinite

TransformValue lst(const IncrementLaw& law, double s, bool centered = false);
// a(s) = lst(s) - 1 kept at full relative accuracy for small s.
double lst_increment(const IncrementLaw& law, double s, bool centered = false);
TailAsymptote lst_asymptotic(const IncrementLaw& law);

// Hot-path sampler with per-law constants resolved up front.
struct FastSampler {
    explicit FastSampler(const IncrementLaw& law);
    double operator()(mc::RandomStream& rng) const {
        switch (mode_) {
            case Mode::pareto_half:
                { const double u = rng.next_unit(); return scale_ / (u * u); }
            case Mode::pareto_two_thirds:
                { const double u = rng.next_unit(); return scale_ / std::cbrt(u * u); }
            case Mode::pareto_pow:
                return scale_ * std::pow(rng.next_unit(), neg_inv_beta_);
            case Mode::exponential:
                return rng.next_exponential() * inv_rate_;
            case Mode::gaussian:
                return rng.next_normal();
            default:
                return slow(rng);
        }
    }

private:
    enum class Mode { pareto_half, pareto_two_thirds, pareto_pow, exponential, gaussian, generic };
    Mode mode_ = Mode::generic;
    double scale_ = 1.0;
    double neg_inv_beta_ = -2.0;
    double inv_rate_ = 1.0;
    IncrementLaw law_;
    double slow(mc::RandomStream& rng) const;
};

enum class BatchKind { zeta, shifted_poisson, deterministic };

struct ZetaTable;

struct BatchLaw {
    BatchKind kind = BatchKind::deterministic;
    double gamma = 0.5;        // zeta exponent
    double mean = 1.0;         // shifted_poisson mean (value of E[V])
    bool mean_tracks_t = false;  // shifted_poisson with mean = t - 1
    std::uint64_t k = 1;       // deterministic batch size

    static BatchLaw zeta(double gamma);
    static BatchLaw shifted_poisson(double mean);
    static BatchLaw shifted_poisson_tracking_t();
    static BatchLaw deterministic(std::uint64_t k);

    std::string describe() const;
};

// Batch parameters with a concrete t substituted for tracking rules.
BatchLaw batch_at_time(const BatchLaw& batch, double t);

std::uint64_t sample_batch(const BatchLaw& batch, mc::RandomStream& rng);
double batch_pgf(const BatchLaw& batch, double z);
// 1 - pgf(1 + a) at full relative accuracy for small a <= 0.
double batch_pgf_one_minus(const BatchLaw& batch, double a);
double batch_mean(const BatchLaw& batch);
double batch_pmf(const BatchLaw& batch, std::uint64_t k);
double batch_tail(const BatchLaw& batch, std::uint64_t k);  // P[V > k]

// Shared per-gamma sampling table for the zeta batch law.
std::shared_ptr<const ZetaTable> zeta_table_for(double gamma);
std::uint64_t sample_zeta(const ZetaTable& table, mc::RandomStream& rng);

}  // namespace ldp::laws
