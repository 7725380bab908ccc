#include "ldp/laws.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ldp/errors.hpp"
#include "ldp/quadrature.hpp"
#include "ldp/specfun.hpp"

namespace ldp::laws {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

double stable_A(double alpha, double theta) {
    const double s0 = std::sin(theta);
    if (s0 <= 0.0) return std::numeric_limits<double>::infinity();
    const double a1 = std::sin(alpha * theta);
    const double a2 = std::sin((1.0 - alpha) * theta);
    return std::pow(a1, alpha / (1.0 - alpha)) * a2 * std::pow(s0, -1.0 / (1.0 - alpha));
}

double stable_tail(double alpha, double x) {
    if (x <= 0.0) return 1.0;
    if (alpha == 0.5) {
        return std::erf(0.5 / std::sqrt(x));
    }
    const double u = std::pow(x, -alpha / (1.0 - alpha));
    auto f = [&](double theta) { return -std::expm1(-stable_A(alpha, theta) * u); };
    const auto r = quad::integrate(f, 0.0, kPi, 1e-305, 1e-11, 44);
    return std::min(1.0, r.value / kPi);
}

double pareto_log_log_tail(const IncrementLaw& law, double x) {
    const double y = std::log(x / law.scale);
    return -law.beta * y + law.log_exponent * std::log1p(y);
}

// Solves tail(x) = p for pareto_log: root of g(y) = -beta*y + q*log1p(y) - ln p
// in y = ln(x/scale) >= 0; g is strictly decreasing because q <= beta.
double pareto_log_tail_inverse(const IncrementLaw& law, double p) {
    const double target = std::log(p);
    double lo = 0.0;
    double hi = std::max(1.0, -target / law.beta * 2.0 + 2.0);
    auto g = [&](double y) { return -law.beta * y + law.log_exponent * std::log1p(y) - target; };
    while (g(hi) > 0.0) hi *= 2.0;
    double y = std::min(hi, std::max(lo, -target / law.beta));
    for (int it = 0; it < 200; ++it) {
        const double gy = g(y);
        if (gy > 0.0)
            lo = y;
        else
            hi = y;
        const double deriv = -law.beta + law.log_exponent / (1.0 + y);
        double step = y - gy / deriv;
        if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
        if (std::abs(step - y) < 1e-15 * std::max(1.0, std::abs(y))) {
            y = step;
            break;
        }
        y = step;
    }
    return law.scale * std::exp(y);
}

double generic_tail_inverse_bisect(const IncrementLaw& law, double p) {
    double lo = (law.kind == LawKind::gaussian_step) ? -40.0 : 0.0;
    double hi = 1.0;
    while (tail(law, hi) > p) {
        hi *= 2.0;
        if (hi > 1e300) break;
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tail(law, mid) > p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, std::abs(hi))) break;
    }
    return hi;
}

// a(s) for unit-scale Pareto via the cancellation-free split
//   a(z) = -Gamma(1-beta) z^beta - beta * sum_{k>=1} (-z)^k / ((k - beta) k!).
double pareto_increment_series(double beta, double z) {
    double acc = -specfun::gamma_fn(1.0 - beta) * std::pow(z, beta);
    double pow_term = 1.0;  // (-z)^k / k!
    for (int k = 1; k <= 120; ++k) {
        pow_term *= -z / k;
        const double term = -beta * pow_term / (double(k) - beta);
        acc += term;
        if (std::abs(term) < 1e-18 * std::abs(acc) && double(k) > z) break;
    }
    return acc;
}

double pareto_increment(double beta, double z) {
    if (z == 0.0) return 0.0;
    if (z <= 10.0) return pareto_increment_series(beta, z);
    return beta * std::pow(z, beta) * specfun::upper_incomplete_gamma(-beta, z) - 1.0;
}

double quadrature_increment(const IncrementLaw& law, double s) {
    const double z0 = s * law.scale;
    auto f = [&](double u) { return std::exp(-u) * tail(law, u / s); };
    const auto r = quad::integrate_to_infinity(f, z0, 1e-305, 1e-13);
    return std::expm1(-z0) - r.value;
}

double require_mean(const IncrementLaw& law) {
    if (!has_finite_mean(law))
        throw UnsupportedError("law has no finite mean: " + law.describe());
    return mean(law);
}

struct ZetaCache {
    std::mutex mutex;
    std::map<std::uint64_t, std::shared_ptr<const ZetaTable>> tables;
};

ZetaCache& zeta_cache() {
    static ZetaCache cache;
    return cache;
}

}  // namespace

struct ZetaTable {
    double gamma = 0.5;
    double s = 1.5;
    double zeta_s = 0.0;
    std::uint64_t K = 1u << 20;
    std::vector<double> cdf;  // cdf[k-1] = P[V <= k]
};

IncrementLaw IncrementLaw::pareto(double beta, double scale) {
    require(beta > 0.0 && beta < 2.0 && beta != 1.0, "pareto: beta must lie in (0,1) or (1,2)");
    require(scale > 0.0, "pareto: scale must be positive");
    IncrementLaw law;
    law.kind = LawKind::pareto;
    law.beta = beta;
    law.scale = scale;
    return law;
}

IncrementLaw IncrementLaw::pareto_log(double beta, double scale, double log_exponent) {
    require(beta > 0.0 && beta < 2.0 && beta != 1.0, "pareto_log: beta must lie in (0,1) or (1,2)");
    require(scale > 0.0, "pareto_log: scale must be positive");
    require(log_exponent <= beta, "pareto_log: log_exponent must be <= beta for a monotone tail");
    IncrementLaw law;
    law.kind = LawKind::pareto_log;
    law.beta = beta;
    law.scale = scale;
    law.log_exponent = log_exponent;
    return law;
}

IncrementLaw IncrementLaw::one_sided_stable(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "one_sided_stable: alpha must lie in (0,1)");
    IncrementLaw law;
    law.kind = LawKind::one_sided_stable;
    law.alpha = alpha;
    law.beta = alpha;
    law.scale = 0.0;
    return law;
}

IncrementLaw IncrementLaw::exponential(double rate) {
    require(rate > 0.0, "exponential: rate must be positive");
    IncrementLaw law;
    law.kind = LawKind::exponential;
    law.rate = rate;
    law.scale = 0.0;
    return law;
}

IncrementLaw IncrementLaw::gaussian_step() {
    IncrementLaw law;
    law.kind = LawKind::gaussian_step;
    law.scale = 0.0;
    return law;
}

std::string IncrementLaw::describe() const {
    char buf[96];
    switch (kind) {
        case LawKind::pareto:
            std::snprintf(buf, sizeof buf, "pareto(beta=%g, scale=%g)", beta, scale);
            break;
        case LawKind::pareto_log:
            std::snprintf(buf, sizeof buf, "pareto_log(beta=%g, scale=%g, q=%g)", beta, scale,
                          log_exponent);
            break;
        case LawKind::one_sided_stable:
            std::snprintf(buf, sizeof buf, "stable(alpha=%g)", alpha);
            break;
        case LawKind::exponential:
            std::snprintf(buf, sizeof buf, "exponential(rate=%g)", rate);
            break;
        case LawKind::gaussian_step:
            std::snprintf(buf, sizeof buf, "gaussian_step");
            break;
    }
    return buf;
}

double sample(const IncrementLaw& law, mc::RandomStream& rng) {
    FastSampler sampler(law);
    return sampler(rng);
}

double tail(const IncrementLaw& law, double x) {
    switch (law.kind) {
        case LawKind::pareto:
            if (x <= law.scale) return 1.0;
            return std::pow(x / law.scale, -law.beta);
        case LawKind::pareto_log:
            if (x <= law.scale) return 1.0;
            return std::exp(pareto_log_log_tail(law, x));
        case LawKind::one_sided_stable:
            return stable_tail(law.alpha, x);
        case LawKind::exponential:
            if (x <= 0.0) return 1.0;
            return std::exp(-law.rate * x);
        case LawKind::gaussian_step:
            return 0.5 * std::erfc(x / std::numbers::sqrt2);
    }
    return 0.0;
}

double cdf(const IncrementLaw& law, double x) { return 1.0 - tail(law, x); }

double tail_inverse(const IncrementLaw& law, double p) {
    require(p > 0.0 && p < 1.0, "tail_inverse: p must lie in (0,1)");
    switch (law.kind) {
        case LawKind::pareto:
            return law.scale * std::pow(p, -1.0 / law.beta);
        case LawKind::pareto_log:
            return pareto_log_tail_inverse(law, p);
        case LawKind::exponential:
            return -std::log(p) / law.rate;
        case LawKind::one_sided_stable:
        case LawKind::gaussian_step:
            return generic_tail_inverse_bisect(law, p);
    }
    return 0.0;
}

bool has_finite_mean(const IncrementLaw& law) {
    switch (law.kind) {
        case LawKind::pareto:
        case LawKind::pareto_log:
            return law.beta > 1.0;
        case LawKind::one_sided_stable:
            return false;
        case LawKind::exponential:
        case LawKind::gaussian_step:
            return true;
    }
    return false;
}

double mean(const IncrementLaw& law) {
    switch (law.kind) {
        case LawKind::pareto:
            if (law.beta <= 1.0) throw UnsupportedError("mean: infinite for pareto beta <= 1");
            return law.scale * law.beta / (law.beta - 1.0);
        case LawKind::pareto_log: {
            if (law.beta <= 1.0) throw UnsupportedError("mean: infinite for pareto_log beta <= 1");
            auto f = [&](double x) { return tail(law, x); };
            const auto r = quad::integrate_to_infinity(f, law.scale, 1e-305, 1e-12);
            return law.scale + r.value;
        }
        case LawKind::one_sided_stable:
            throw UnsupportedError("mean: infinite for one-sided stable with alpha < 1");
        case LawKind::exponential:
            return 1.0 / law.rate;
        case LawKind::gaussian_step:
            return 0.0;
    }
    return 0.0;
}

double lst_increment(const IncrementLaw& law, double s, bool centered) {
    require(s >= 0.0, "lst_increment: requires s >= 0");
    if (s == 0.0) return 0.0;
    double a;
    switch (law.kind) {
        case LawKind::pareto:
            a = pareto_increment(law.beta, s * law.scale);
            break;
        case LawKind::pareto_log:
            a = quadrature_increment(law, s);
            break;
        case LawKind::one_sided_stable:
            a = std::expm1(-std::pow(s, law.alpha));
            break;
        case LawKind::exponential:
            a = -s / (law.rate + s);
            break;
        case LawKind::gaussian_step:
            throw UnsupportedError("lst_increment: gaussian_step is a walk driver, not a transform law");
        default:
            a = 0.0;
    }
    if (!centered) return a;
    const double mu = require_mean(law);
    return std::expm1(s * mu) + a * std::exp(s * mu);
}

TransformValue lst(const IncrementLaw& law, double s, bool centered) {
    TransformValue tv;
    tv.s = s;
    tv.value = 1.0 + lst_increment(law, s, centered);
    switch (law.kind) {
        case LawKind::pareto:
            tv.method = TransformMethod::series;
            break;
        case LawKind::pareto_log:
            tv.method = TransformMethod::quadrature;
            break;
        default:
            tv.method = TransformMethod::closed_form;
            break;
    }
    return tv;
}

TailAsymptote lst_asymptotic(const IncrementLaw& law) {
    switch (law.kind) {
        case LawKind::pareto:
        case LawKind::pareto_log:
            return {law.beta, std::pow(law.scale, law.beta)};
        case LawKind::one_sided_stable:
            return {law.alpha, 1.0 / specfun::gamma_fn(1.0 - law.alpha)};
        case LawKind::exponential:
        case LawKind::gaussian_step:
            throw UnsupportedError("lst_asymptotic: law is not regularly varying with index in (0,2): " +
                                   law.describe());
    }
    return {0.0, 0.0};
}

FastSampler::FastSampler(const IncrementLaw& law) : law_(law) {
    switch (law.kind) {
        case LawKind::pareto:
            scale_ = law.scale;
            if (law.beta == 0.5) {
                mode_ = Mode::pareto_half;
            } else if (law.beta == 1.5) {
                mode_ = Mode::pareto_two_thirds;
            } else {
                mode_ = Mode::pareto_pow;
                neg_inv_beta_ = -1.0 / law.beta;
            }
            break;
        case LawKind::exponential:
            mode_ = Mode::exponential;
            inv_rate_ = 1.0 / law.rate;
            break;
        case LawKind::gaussian_step:
            mode_ = Mode::gaussian;
            break;
        default:
            mode_ = Mode::generic;
            break;
    }
}

double FastSampler::slow(mc::RandomStream& rng) const {
    if (law_.kind == LawKind::one_sided_stable) {
        const double theta = kPi * rng.next_unit();
        const double w = rng.next_exponential();
        if (law_.alpha == 0.5) {
            const double c = std::cos(0.5 * theta);
            return 1.0 / (4.0 * w * c * c);
        }
        const double a = stable_A(law_.alpha, theta);
        return std::pow(a / w, (1.0 - law_.alpha) / law_.alpha);
    }
    return pareto_log_tail_inverse(law_, rng.next_unit());
}

BatchLaw BatchLaw::zeta(double gamma) {
    require(gamma > 0.0 && gamma < 2.0, "zeta batch: gamma must lie in (0,2)");
    BatchLaw b;
    b.kind = BatchKind::zeta;
    b.gamma = gamma;
    return b;
}

BatchLaw BatchLaw::shifted_poisson(double mean) {
    require(mean >= 1.0, "shifted_poisson batch: mean must be >= 1");
    BatchLaw b;
    b.kind = BatchKind::shifted_poisson;
    b.mean = mean;
    return b;
}

BatchLaw BatchLaw::shifted_poisson_tracking_t() {
    BatchLaw b;
    b.kind = BatchKind::shifted_poisson;
    b.mean = 1.0;
    b.mean_tracks_t = true;
    return b;
}

BatchLaw BatchLaw::deterministic(std::uint64_t k) {
    require(k >= 1, "deterministic batch: k must be >= 1");
    BatchLaw b;
    b.kind = BatchKind::deterministic;
    b.k = k;
    return b;
}

std::string BatchLaw::describe() const {
    char buf[96];
    switch (kind) {
        case BatchKind::zeta:
            std::snprintf(buf, sizeof buf, "zeta(gamma=%g)", gamma);
            break;
        case BatchKind::shifted_poisson:
            if (mean_tracks_t)
                std::snprintf(buf, sizeof buf, "shifted_poisson(mean=t-1)");
            else
                std::snprintf(buf, sizeof buf, "shifted_poisson(mean=%g)", mean);
            break;
        case BatchKind::deterministic:
            std::snprintf(buf, sizeof buf, "deterministic(k=%llu)", (unsigned long long)k);
            break;
    }
    return buf;
}

BatchLaw batch_at_time(const BatchLaw& batch, double t) {
    if (batch.kind == BatchKind::shifted_poisson && batch.mean_tracks_t) {
        require(t >= 2.0, "shifted_poisson(mean=t-1): requires t >= 2 so the mean is >= 1");
        BatchLaw b = batch;
        b.mean = t - 1.0;
        b.mean_tracks_t = false;
        return b;
    }
    return batch;
}

std::shared_ptr<const ZetaTable> zeta_table_for(double gamma) {
    auto& cache = zeta_cache();
    std::uint64_t key;
    static_assert(sizeof key == sizeof gamma);
    std::memcpy(&key, &gamma, sizeof key);
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.tables.find(key);
    if (it != cache.tables.end()) return it->second;

    auto table = std::make_shared<ZetaTable>();
    table->gamma = gamma;
    table->s = 1.0 + gamma;
    table->zeta_s = specfun::riemann_zeta(table->s);
    table->cdf.resize(table->K);
    long double acc = 0.0L;
    for (std::uint64_t k = 1; k <= table->K; ++k) {
        acc += powl((long double)k, -(long double)table->s);
        table->cdf[k - 1] = double(acc / (long double)table->zeta_s);
    }
    cache.tables.emplace(key, table);
    return table;
}

std::uint64_t sample_zeta(const ZetaTable& table, mc::RandomStream& rng) {
    const double u = rng.next_unit();
    if (u <= table.cdf.back()) {
        const auto it = std::lower_bound(table.cdf.begin(), table.cdf.end(), u);
        return std::uint64_t(it - table.cdf.begin()) + 1;
    }
    const double L = double(table.K) + 0.5;
    for (;;) {
        const double y = L * std::pow(rng.next_unit(), -1.0 / table.gamma);
        if (y >= 4.0e18) return std::uint64_t(4000000000000000000ULL);
        const std::uint64_t k = std::uint64_t(y + 0.5);
        const double lo = double(k) - 0.5, hi = double(k) + 0.5;
        const double cell_mass =
            (std::pow(lo, -table.gamma) - std::pow(hi, -table.gamma)) / table.gamma;
        const double accept = std::pow(double(k), -table.s) / cell_mass;
        if (rng.next_unit() <= accept) return k;
    }
}

std::uint64_t sample_batch(const BatchLaw& batch, mc::RandomStream& rng) {
    switch (batch.kind) {
        case BatchKind::zeta: {
            const auto table = zeta_table_for(batch.gamma);
            return sample_zeta(*table, rng);
        }
        case BatchKind::shifted_poisson:
            require(!batch.mean_tracks_t, "shifted_poisson batch: resolve mean with batch_at_time first");
            return 1 + rng.next_poisson(batch.mean - 1.0);
        case BatchKind::deterministic:
            return batch.k;
    }
    return 1;
}

double batch_pgf(const BatchLaw& batch, double z) {
    require(z >= 0.0, "batch_pgf: requires z >= 0");
    switch (batch.kind) {
        case BatchKind::zeta:
            require(z <= 1.0, "batch_pgf: zeta batch pgf has radius 1");
            if (z == 0.0) return 0.0;
            return specfun::polylog(1.0 + batch.gamma, z) / specfun::riemann_zeta(1.0 + batch.gamma);
        case BatchKind::shifted_poisson:
            require(!batch.mean_tracks_t, "batch_pgf: resolve mean with batch_at_time first");
            return z * std::exp((batch.mean - 1.0) * (z - 1.0));
        case BatchKind::deterministic:
            return std::pow(z, double(batch.k));
    }
    return 0.0;
}

double batch_pgf_one_minus(const BatchLaw& batch, double a) {
    require(a > -1.0, "batch_pgf_one_minus: requires a > -1");
    if (a == 0.0) return 0.0;
    switch (batch.kind) {
        case BatchKind::zeta:
            require(a <= 0.0, "batch_pgf_one_minus: zeta batch pgf has radius 1");
            return -specfun::polylog_minus_zeta(1.0 + batch.gamma, 1.0 + a) /
                   specfun::riemann_zeta(1.0 + batch.gamma);
        case BatchKind::shifted_poisson: {
            require(!batch.mean_tracks_t, "batch_pgf_one_minus: resolve mean with batch_at_time first");
            const double b = batch.mean - 1.0;
            return -std::expm1(b * a) - a * std::exp(b * a);
        }
        case BatchKind::deterministic:
            return -std::expm1(double(batch.k) * std::log1p(a));
    }
    return 0.0;
}

double batch_mean(const BatchLaw& batch) {
    switch (batch.kind) {
        case BatchKind::zeta:
            if (batch.gamma <= 1.0) return std::numeric_limits<double>::infinity();
            return specfun::riemann_zeta(batch.gamma) / specfun::riemann_zeta(1.0 + batch.gamma);
        case BatchKind::shifted_poisson:
            require(!batch.mean_tracks_t, "batch_mean: resolve mean with batch_at_time first");
            return batch.mean;
        case BatchKind::deterministic:
            return double(batch.k);
    }
    return 0.0;
}

double batch_pmf(const BatchLaw& batch, std::uint64_t k) {
    if (k == 0) return 0.0;
    switch (batch.kind) {
        case BatchKind::zeta:
            return std::pow(double(k), -(1.0 + batch.gamma)) /
                   specfun::riemann_zeta(1.0 + batch.gamma);
        case BatchKind::shifted_poisson: {
            require(!batch.mean_tracks_t, "batch_pmf: resolve mean with batch_at_time first");
            const double b = batch.mean - 1.0;
            if (b == 0.0) return k == 1 ? 1.0 : 0.0;
            const double m = double(k - 1);
            return std::exp(m * std::log(b) - b - std::lgamma(m + 1.0));
        }
        case BatchKind::deterministic:
            return k == batch.k ? 1.0 : 0.0;
    }
    return 0.0;
}

double batch_tail(const BatchLaw& batch, std::uint64_t k) {
    switch (batch.kind) {
        case BatchKind::zeta: {
            double acc = 0.0;
            for (std::uint64_t j = 1; j <= k; ++j) acc += batch_pmf(batch, j);
            return std::max(0.0, 1.0 - acc);
        }
        case BatchKind::shifted_poisson: {
            double acc = 0.0;
            for (std::uint64_t j = 1; j <= k; ++j) acc += batch_pmf(batch, j);
            return std::max(0.0, 1.0 - acc);
        }
        case BatchKind::deterministic:
            return k < batch.k ? 1.0 : 0.0;
    }
    return 0.0;
}

}  // namespace ldp::laws
