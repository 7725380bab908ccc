#include "ldp/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ldp/errors.hpp"
#include "ldp/specfun.hpp"

namespace ldp::counting {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

constexpr std::uint64_t kFirstPassageTableSize = 1ull << 20;

const std::vector<double>& first_passage_table() {
    static const std::vector<double> table = [] {
        std::vector<double> q(kFirstPassageTableSize + 1);
        long double acc = 1.0L;
        q[0] = 1.0;
        for (std::uint64_t n = 1; n <= kFirstPassageTableSize; ++n) {
            acc *= (2.0L * n - 1.0L) / (2.0L * n);
            q[n] = double(acc);
        }
        return q;
    }();
    return table;
}

double first_passage_survival_asymptotic(double n) {
    const double inv = 1.0 / n;
    const double corr =
        1.0 + inv * (-0.125 + inv * (0.0078125 + inv * (0.0048828125 - inv * 6.4086914e-4)));
    return corr / std::sqrt(3.14159265358979323846 * n);
}

double survival_at(double n) {
    const auto& q = first_passage_table();
    if (n <= double(kFirstPassageTableSize)) return q[std::uint64_t(n)];
    return std::min(q[kFirstPassageTableSize], first_passage_survival_asymptotic(n));
}

std::uint64_t sample_first_passage_time(mc::RandomStream& rng, std::uint64_t cap, bool& capped) {
    const auto& q = first_passage_table();
    const double u = rng.next_unit();
    if (u > q[1]) return 1;
    if (u <= survival_at(double(cap))) {
        capped = true;
        return cap;
    }
    std::uint64_t lo = 1, hi = cap;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (survival_at(double(mid)) < u)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double base_poisson_rho(const CountingSpec& spec) {
    if (!spec.base || spec.base->kind != CountKind::poisson)
        throw UnsupportedError(
            "compound counting: only a poisson base process has tractable transforms");
    return spec.base->rho;
}

struct TwoPointSupport {
    double n1 = 1.0;
    double n2 = 1.0;
    double p2 = 0.0;  // P[N = n2]
};

TwoPointSupport two_point_support(const CountingSpec& spec, double t) {
    const double rho = spec.rho_of_t(t);
    require(rho > 1.0, "two_point counting: rho(t) must exceed 1");
    TwoPointSupport s;
    s.n1 = std::round(rho);
    s.n2 = std::round(std::pow(rho, 1.0 + 1.0 / spec.gamma));
    s.p2 = 1.0 / (rho * rho);
    return s;
}

}  // namespace

double GrowthRule::operator()(double t) const {
    require(t > 0.0, "growth rule: requires t > 0");
    if (exponent == 0.0) return coeff;
    if (exponent == 1.0) return coeff * t;
    return coeff * std::pow(t, exponent);
}

std::string GrowthRule::describe() const {
    char buf[64];
    if (exponent == 0.0)
        std::snprintf(buf, sizeof buf, "%g", coeff);
    else if (coeff == 1.0 && exponent == 1.0)
        std::snprintf(buf, sizeof buf, "t");
    else
        std::snprintf(buf, sizeof buf, "%g*t^%g", coeff, exponent);
    return buf;
}

CountingSpec CountingSpec::poisson(double rho) {
    require(rho > 0.0, "poisson counting: rho must be positive");
    CountingSpec s;
    s.kind = CountKind::poisson;
    s.rho = rho;
    return s;
}

CountingSpec CountingSpec::geometric(GrowthRule rho_of_t) {
    require(rho_of_t.coeff > 0.0, "geometric counting: rho coefficient must be positive");
    require(rho_of_t.exponent >= 0.0, "geometric counting: rho exponent must be >= 0");
    CountingSpec s;
    s.kind = CountKind::geometric;
    s.rho_of_t = rho_of_t;
    return s;
}

CountingSpec CountingSpec::renewal(laws::IncrementLaw waiting) {
    require(waiting.kind != laws::LawKind::gaussian_step,
            "renewal counting: waiting times must be nonnegative");
    CountingSpec s;
    s.kind = CountKind::renewal;
    s.waiting = waiting;
    return s;
}

CountingSpec CountingSpec::compound(CountingSpec base, laws::BatchLaw batch) {
    if (base.kind != CountKind::poisson)
        throw UnsupportedError(
            "compound counting: only a poisson base process is supported");
    CountingSpec s;
    s.kind = CountKind::compound_renewal;
    s.base = std::make_shared<const CountingSpec>(std::move(base));
    s.batch = batch;
    return s;
}

CountingSpec CountingSpec::compound_poisson(double rho, laws::BatchLaw batch) {
    return compound(poisson(rho), batch);
}

CountingSpec CountingSpec::first_passage(laws::BatchLaw cost) {
    CountingSpec s;
    s.kind = CountKind::first_passage;
    s.batch = cost;
    return s;
}

CountingSpec CountingSpec::two_point(GrowthRule rho_of_t, double gamma) {
    require(gamma > 0.0, "two_point counting: gamma must be positive");
    CountingSpec s;
    s.kind = CountKind::two_point;
    s.rho_of_t = rho_of_t;
    s.gamma = gamma;
    return s;
}

CountingSpec CountingSpec::deterministic(std::uint64_t n) {
    require(n >= 1, "deterministic counting: n must be >= 1");
    CountingSpec s;
    s.kind = CountKind::deterministic;
    s.fixed_n = n;
    return s;
}

std::string CountingSpec::describe() const {
    char buf[192];
    switch (kind) {
        case CountKind::poisson:
            std::snprintf(buf, sizeof buf, "poisson(rho=%g)", rho);
            break;
        case CountKind::geometric:
            std::snprintf(buf, sizeof buf, "geometric(rho=%s)", rho_of_t.describe().c_str());
            break;
        case CountKind::renewal:
            std::snprintf(buf, sizeof buf, "renewal(waiting=%s)", waiting.describe().c_str());
            break;
        case CountKind::compound_renewal:
            std::snprintf(buf, sizeof buf, "compound(base=%s, batch=%s)",
                          base ? base->describe().c_str() : "?", batch.describe().c_str());
            break;
        case CountKind::first_passage:
            std::snprintf(buf, sizeof buf, "first_passage(cost=%s)", batch.describe().c_str());
            break;
        case CountKind::two_point:
            std::snprintf(buf, sizeof buf, "two_point(rho=%s, gamma=%g)",
                          rho_of_t.describe().c_str(), gamma);
            break;
        case CountKind::deterministic:
            std::snprintf(buf, sizeof buf, "deterministic(n=%llu)", (unsigned long long)fixed_n);
            break;
    }
    return buf;
}

CountSample sample_count(const CountingSpec& spec, double t, std::uint64_t cap,
                         mc::RandomStream& rng) {
    require(cap >= 1, "sample_count: cap must be >= 1");
    CountSample out;
    out.cap = cap;
    switch (spec.kind) {
        case CountKind::poisson: {
            require(t > 0.0, "poisson counting: requires t > 0");
            const std::uint64_t n = rng.next_poisson(spec.rho * t);
            out.capped = n > cap;
            out.n = out.capped ? cap : n;
            return out;
        }
        case CountKind::geometric: {
            const double rho = spec.rho_of_t(t);
            require(rho >= 1.0, "geometric counting: rho(t) must be >= 1");
            const std::uint64_t n = rng.next_geometric_ge1(1.0 / rho);
            out.capped = n > cap;
            out.n = out.capped ? cap : n;
            return out;
        }
        case CountKind::renewal: {
            require(t > 0.0, "renewal counting: requires t > 0");
            laws::FastSampler wait(spec.waiting);
            double acc = 0.0;
            std::uint64_t n = 0;
            while (n < cap) {
                acc += wait(rng);
                if (acc > t) break;
                ++n;
            }
            out.capped = n >= cap && acc <= t;
            out.n = n;
            return out;
        }
        case CountKind::compound_renewal: {
            const double rho = base_poisson_rho(spec);
            require(t > 0.0, "compound counting: requires t > 0");
            const std::uint64_t batches = rng.next_poisson(rho * t);
            const laws::BatchLaw batch = laws::batch_at_time(spec.batch, t);
            std::shared_ptr<const laws::ZetaTable> table;
            if (batch.kind == laws::BatchKind::zeta) table = laws::zeta_table_for(batch.gamma);
            std::uint64_t n = 0;
            for (std::uint64_t j = 0; j < batches; ++j) {
                const std::uint64_t v =
                    table ? laws::sample_zeta(*table, rng) : laws::sample_batch(batch, rng);
                if (v >= cap - n) {
                    out.capped = true;
                    out.n = cap;
                    return out;
                }
                n += v;
            }
            out.n = n;
            return out;
        }
        case CountKind::first_passage: {
            const laws::BatchLaw cost = laws::batch_at_time(spec.batch, t);
            bool tau_capped = false;
            const std::uint64_t tau = sample_first_passage_time(rng, cap, tau_capped);
            if (tau_capped) {
                out.capped = true;
                out.n = cap;
                return out;
            }
            if (cost.kind == laws::BatchKind::deterministic) {
                const double total = double(tau) * double(cost.k);
                if (total >= double(cap)) {
                    out.capped = true;
                    out.n = cap;
                    return out;
                }
                out.n = tau * cost.k;
                return out;
            }
            std::uint64_t n = 0;
            for (std::uint64_t j = 0; j < tau; ++j) {
                const std::uint64_t v = laws::sample_batch(cost, rng);
                if (v >= cap - n) {
                    out.capped = true;
                    out.n = cap;
                    return out;
                }
                n += v;
            }
            out.n = n;
            return out;
        }
        case CountKind::two_point: {
            const auto s = two_point_support(spec, t);
            const double pick = rng.next_unit();
            const double n = (pick < s.p2) ? s.n2 : s.n1;
            if (n >= double(cap)) {
                out.capped = n > double(cap);
                out.n = cap;
                return out;
            }
            out.n = std::uint64_t(n);
            return out;
        }
        case CountKind::deterministic: {
            out.capped = spec.fixed_n > cap;
            out.n = out.capped ? cap : spec.fixed_n;
            return out;
        }
    }
    return out;
}

double pgf(const CountingSpec& spec, double t, double z) {
    require(z >= 0.0, "pgf: requires z >= 0");
    switch (spec.kind) {
        case CountKind::poisson:
            require(t > 0.0, "poisson counting: requires t > 0");
            return std::exp(spec.rho * t * (z - 1.0));
        case CountKind::geometric: {
            const double rho = spec.rho_of_t(t);
            require(rho >= 1.0, "geometric counting: rho(t) must be >= 1");
            const double denom = rho - (rho - 1.0) * z;
            require(denom > 0.0, "pgf: z outside the geometric radius rho/(rho-1)");
            return z / denom;
        }
        case CountKind::renewal:
            throw UnsupportedError("pgf: renewal counting has no closed-form pgf");
        case CountKind::compound_renewal: {
            const double rho = base_poisson_rho(spec);
            require(t > 0.0, "compound counting: requires t > 0");
            const laws::BatchLaw batch = laws::batch_at_time(spec.batch, t);
            return std::exp(rho * t * (laws::batch_pgf(batch, z) - 1.0));
        }
        case CountKind::first_passage: {
            require(z <= 1.0, "pgf: first passage pgf is defined for z <= 1");
            const laws::BatchLaw cost = laws::batch_at_time(spec.batch, t);
            return 1.0 - std::sqrt(1.0 - laws::batch_pgf(cost, z));
        }
        case CountKind::two_point: {
            const auto s = two_point_support(spec, t);
            return (1.0 - s.p2) * std::pow(z, s.n1) + s.p2 * std::pow(z, s.n2);
        }
        case CountKind::deterministic:
            return std::pow(z, double(spec.fixed_n));
    }
    return 0.0;
}

double pgf_one_minus(const CountingSpec& spec, double t, double a) {
    require(a > -1.0, "pgf_one_minus: requires a > -1");
    switch (spec.kind) {
        case CountKind::poisson:
            require(t > 0.0, "poisson counting: requires t > 0");
            return -std::expm1(spec.rho * t * a);
        case CountKind::geometric: {
            const double rho = spec.rho_of_t(t);
            require(rho >= 1.0, "geometric counting: rho(t) must be >= 1");
            const double denom = 1.0 - (rho - 1.0) * a;
            require(denom > 0.0, "pgf_one_minus: z outside the geometric radius rho/(rho-1)");
            return -rho * a / denom;
        }
        case CountKind::renewal:
            throw UnsupportedError("pgf_one_minus: renewal counting has no closed-form pgf");
        case CountKind::compound_renewal: {
            const double rho = base_poisson_rho(spec);
            require(t > 0.0, "compound counting: requires t > 0");
            const laws::BatchLaw batch = laws::batch_at_time(spec.batch, t);
            return -std::expm1(-rho * t * laws::batch_pgf_one_minus(batch, a));
        }
        case CountKind::first_passage: {
            require(a <= 0.0, "pgf_one_minus: first passage pgf is defined for z <= 1");
            const laws::BatchLaw cost = laws::batch_at_time(spec.batch, t);
            return std::sqrt(laws::batch_pgf_one_minus(cost, a));
        }
        case CountKind::two_point: {
            const auto s = two_point_support(spec, t);
            const double l = std::log1p(a);
            return -((1.0 - s.p2) * std::expm1(s.n1 * l) + s.p2 * std::expm1(s.n2 * l));
        }
        case CountKind::deterministic:
            return -std::expm1(double(spec.fixed_n) * std::log1p(a));
    }
    return 0.0;
}

MeanCount mean_count(const CountingSpec& spec, double t) {
    switch (spec.kind) {
        case CountKind::poisson:
            require(t > 0.0, "poisson counting: requires t > 0");
            return {spec.rho * t, true, true};
        case CountKind::geometric: {
            const double rho = spec.rho_of_t(t);
            require(rho >= 1.0, "geometric counting: rho(t) must be >= 1");
            return {rho, true, true};
        }
        case CountKind::renewal: {
            require(t > 0.0, "renewal counting: requires t > 0");
            if (spec.waiting.kind == laws::LawKind::exponential)
                return {spec.waiting.rate * t, true, true};
            if (laws::has_finite_mean(spec.waiting))
                return {t / laws::mean(spec.waiting), true, false};
            const auto asym = laws::lst_asymptotic(spec.waiting);
            const double value =
                std::pow(t, asym.index) /
                (asym.coeff * specfun::gamma_fn(1.0 + asym.index) *
                 specfun::gamma_fn(1.0 - asym.index));
            return {value, true, false};
        }
        case CountKind::compound_renewal: {
            const double rho = base_poisson_rho(spec);
            require(t > 0.0, "compound counting: requires t > 0");
            const laws::BatchLaw batch = laws::batch_at_time(spec.batch, t);
            const double mv = laws::batch_mean(batch);
            if (!std::isfinite(mv)) return {mv, false, true};
            return {rho * t * mv, true, true};
        }
        case CountKind::first_passage:
            return {std::numeric_limits<double>::infinity(), false, true};
        case CountKind::two_point: {
            const auto s = two_point_support(spec, t);
            return {(1.0 - s.p2) * s.n1 + s.p2 * s.n2, true, true};
        }
        case CountKind::deterministic:
            return {double(spec.fixed_n), true, true};
    }
    return {0.0, true, true};
}

CountTailAsymptote count_tail_asymptote(const CountingSpec& spec, double t) {
    switch (spec.kind) {
        case CountKind::compound_renewal: {
            const double rho = base_poisson_rho(spec);
            require(t > 0.0, "compound counting: requires t > 0");
            const laws::BatchLaw batch = laws::batch_at_time(spec.batch, t);
            if (batch.kind != laws::BatchKind::zeta || batch.gamma >= 1.0)
                throw UnsupportedError(
                    "count tail asymptote: compound counting needs zeta batches with gamma < 1");
            const double g = batch.gamma;
            const double C_t = rho * t * specfun::gamma_fn(1.0 - g) /
                               (g * specfun::riemann_zeta(1.0 + g));
            return {g, C_t};
        }
        case CountKind::first_passage: {
            const laws::BatchLaw cost = laws::batch_at_time(spec.batch, t);
            return {0.5, std::sqrt(laws::batch_mean(cost))};
        }
        default:
            throw UnsupportedError(
                "count tail asymptote: requires an infinite-mean counting family (compound "
                "zeta or first passage), got " +
                spec.describe());
    }
}

double tail_count_asymptotic(const CountingSpec& spec, double t, double n) {
    require(n >= 1.0, "tail_count_asymptotic: requires n >= 1");
    const auto asym = count_tail_asymptote(spec, t);
    return asym.C_t * std::pow(n, -asym.gamma) / specfun::gamma_fn(1.0 - asym.gamma);
}

double mean_count_capped(const CountingSpec& spec, double t, std::uint64_t cap) {
    const auto mc = mean_count(spec, t);
    if (mc.finite) return std::min(mc.value, double(cap));
    const auto asym = count_tail_asymptote(spec, t);
    const double A = asym.C_t / specfun::gamma_fn(1.0 - asym.gamma);
    const double n0 = std::min(std::pow(A, 1.0 / asym.gamma), double(cap));
    return n0 + A *
                    (std::pow(double(cap), 1.0 - asym.gamma) - std::pow(n0, 1.0 - asym.gamma)) /
                    (1.0 - asym.gamma);
}

double exact_moment(const CountingSpec& spec, double t, int q) {
    require(q >= 1, "exact_moment: q must be >= 1");
    switch (spec.kind) {
        case CountKind::two_point: {
            const auto s = two_point_support(spec, t);
            return (1.0 - s.p2) * std::pow(s.n1, double(q)) + s.p2 * std::pow(s.n2, double(q));
        }
        case CountKind::deterministic:
            return std::pow(double(spec.fixed_n), double(q));
        default:
            throw UnsupportedError("exact_moment: closed moments only for two_point and "
                                   "deterministic counting");
    }
}

double first_passage_survival(std::uint64_t n) { return survival_at(double(n)); }

std::uint64_t first_passage_table_size() { return kFirstPassageTableSize; }

}  // namespace ldp::counting
