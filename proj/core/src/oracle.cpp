#include "ldp/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "ldp/errors.hpp"
#include "ldp/quadrature.hpp"
#include "ldp/rng.hpp"

namespace ldp::oracle {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

double support_min(const laws::IncrementLaw& law) {
    switch (law.kind) {
        case laws::LawKind::pareto:
        case laws::LawKind::pareto_log:
            return law.scale;
        case laws::LawKind::exponential:
            return 0.0;
        default:
            throw UnsupportedError("convolution oracle: law has no closed-form density: " +
                                   law.describe());
    }
}

double density(const laws::IncrementLaw& law, double x) {
    switch (law.kind) {
        case laws::LawKind::pareto:
            if (x < law.scale) return 0.0;
            return law.beta / law.scale * std::pow(x / law.scale, -law.beta - 1.0);
        case laws::LawKind::pareto_log: {
            if (x < law.scale) return 0.0;
            const double y = std::log(x / law.scale);
            return laws::tail(law, x) * (law.beta - law.log_exponent / (1.0 + y)) / x;
        }
        case laws::LawKind::exponential:
            if (x < 0.0) return 0.0;
            return law.rate * std::exp(-law.rate * x);
        default:
            throw UnsupportedError("convolution oracle: law has no closed-form density: " +
                                   law.describe());
    }
}

quad::Result two_fold_tail(const laws::IncrementLaw& law, double x) {
    const double xm = support_min(law);
    quad::Result r;
    if (x <= 2.0 * xm) {
        r.value = 1.0;
        r.error_bound = 0.0;
        return r;
    }
    auto f = [&](double y) { return density(law, y) * laws::tail(law, x - y); };
    const auto inner = quad::integrate(f, xm, x - xm, 1e-13, 1e-12, 46);
    r.value = laws::tail(law, x - xm) + inner.value;
    r.error_bound = inner.error_bound + 4e-16;
    return r;
}

quad::Result three_fold_tail(const laws::IncrementLaw& law, double x) {
    const double xm = support_min(law);
    quad::Result r;
    if (x <= 3.0 * xm) {
        r.value = 1.0;
        r.error_bound = 0.0;
        return r;
    }
    double worst_inner = 0.0;
    auto f = [&](double y) {
        const auto t2 = two_fold_tail(law, x - y);
        if (t2.error_bound > worst_inner) worst_inner = t2.error_bound;
        return density(law, y) * t2.value;
    };
    const auto outer = quad::integrate(f, xm, x - 2.0 * xm, 1e-12, 1e-10, 40);
    r.value = laws::tail(law, x - 2.0 * xm) + outer.value;
    r.error_bound = outer.error_bound + worst_inner * std::max(0.0, x - 3.0 * xm) + 1e-15;
    return r;
}

}  // namespace

OracleResult convolution_tail(const laws::IncrementLaw& law, int n, double x) {
    require(n == 2 || n == 3, "convolution oracle: n must be 2 or 3");
    const auto r = (n == 2) ? two_fold_tail(law, x) : three_fold_tail(law, x);
    OracleResult out;
    out.value = r.value;
    out.error_bound = r.error_bound;
    out.method = OracleMethod::quadrature;
    return out;
}

OracleResult enumerate_pgf(const counting::CountingSpec& spec, double t, double z,
                           std::uint64_t n_max) {
    require(z >= 0.0 && z <= 1.0, "enumerate_pgf: z must lie in [0,1]");
    require(n_max >= 1, "enumerate_pgf: n_max must be >= 1");
    std::vector<double> pmf;  // pmf[n] = P[N = n], n = 0..n_max
    pmf.assign(std::size_t(n_max) + 1, 0.0);

    switch (spec.kind) {
        case counting::CountKind::poisson: {
            const double lambda = spec.rho * t;
            require(lambda <= 700.0, "enumerate_pgf: poisson mean too large to enumerate");
            pmf[0] = std::exp(-lambda);
            for (std::uint64_t n = 1; n <= n_max; ++n)
                pmf[n] = pmf[n - 1] * lambda / double(n);
            break;
        }
        case counting::CountKind::geometric: {
            const double rho = spec.rho_of_t(t);
            require(rho >= 1.0, "enumerate_pgf: geometric rho(t) must be >= 1");
            const double p = 1.0 / rho;
            double cur = p;
            for (std::uint64_t n = 1; n <= n_max; ++n) {
                pmf[n] = cur;
                cur *= (1.0 - p);
            }
            break;
        }
        case counting::CountKind::compound_renewal: {
            if (!spec.base || spec.base->kind != counting::CountKind::poisson)
                throw UnsupportedError("enumerate_pgf: compound enumeration needs a poisson base");
            const double lambda = spec.base->rho * t;
            require(lambda <= 700.0, "enumerate_pgf: poisson mean too large to enumerate");
            const laws::BatchLaw batch = laws::batch_at_time(spec.batch, t);
            std::vector<double> f(std::size_t(n_max) + 1, 0.0);
            for (std::uint64_t k = 1; k <= n_max; ++k) f[k] = laws::batch_pmf(batch, k);
            pmf[0] = std::exp(-lambda);
            for (std::uint64_t n = 1; n <= n_max; ++n) {
                double acc = 0.0;
                for (std::uint64_t k = 1; k <= n; ++k)
                    acc += double(k) * f[k] * pmf[n - k];
                pmf[n] = lambda / double(n) * acc;
            }
            break;
        }
        case counting::CountKind::first_passage: {
            const laws::BatchLaw cost = laws::batch_at_time(spec.batch, t);
            if (cost.kind != laws::BatchKind::deterministic || cost.k != 1)
                throw UnsupportedError(
                    "enumerate_pgf: first passage enumeration needs deterministic unit cost");
            for (std::uint64_t n = 1; n <= n_max; ++n)
                pmf[n] = counting::first_passage_survival(n - 1) -
                         counting::first_passage_survival(n);
            break;
        }
        case counting::CountKind::two_point: {
            const double rho = spec.rho_of_t(t);
            require(rho > 1.0, "enumerate_pgf: two_point rho(t) must exceed 1");
            const double n1 = std::round(rho);
            const double n2 = std::round(std::pow(rho, 1.0 + 1.0 / spec.gamma));
            const double p2 = 1.0 / (rho * rho);
            if (n1 <= double(n_max)) pmf[std::uint64_t(n1)] += 1.0 - p2;
            if (n2 <= double(n_max)) pmf[std::uint64_t(n2)] += p2;
            break;
        }
        case counting::CountKind::deterministic: {
            if (spec.fixed_n <= n_max) pmf[spec.fixed_n] = 1.0;
            break;
        }
        case counting::CountKind::renewal:
            throw UnsupportedError("enumerate_pgf: renewal counting has no closed pmf");
    }

    double value = 0.0;
    double mass = 0.0;
    double zn = 1.0;
    for (std::uint64_t n = 0; n <= n_max; ++n) {
        value += pmf[n] * zn;
        mass += pmf[n];
        zn *= z;
    }
    const double mass_left = std::max(0.0, 1.0 - mass);
    OracleResult out;
    out.value = value;
    out.error_bound = std::pow(z, double(n_max)) * mass_left + double(n_max) * 1e-16;
    out.method = OracleMethod::enumeration;
    return out;
}

std::vector<WalkTailRow> first_passage_walk(std::uint64_t walks, std::uint64_t n_max,
                                            std::uint64_t seed) {
    require(walks >= 1, "first_passage_walk: walks must be >= 1");
    require(n_max >= 1, "first_passage_walk: n_max must be >= 1");
    mc::SeedSpec seeds{seed};
    std::vector<std::uint64_t> exceed(std::size_t(n_max) + 1, 0);
    for (std::uint64_t w = 0; w < walks; ++w) {
        auto rng = seeds.stream_for(w);
        double s = 0.0;
        std::uint64_t tau = n_max + 1;
        for (std::uint64_t k = 1; k <= n_max; ++k) {
            s += rng.next_normal();
            if (s > 0.0) {
                tau = k;
                break;
            }
        }
        const std::uint64_t last = std::min(tau - 1, n_max);
        for (std::uint64_t n = 1; n <= last; ++n) ++exceed[n];
    }

    std::vector<WalkTailRow> rows;
    rows.reserve(n_max);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        WalkTailRow row;
        row.n = n;
        row.empirical = double(exceed[n]) / double(walks);
        row.exact = counting::first_passage_survival(n);
        row.stderr_ = std::sqrt(std::max(row.empirical * (1.0 - row.empirical), 1e-12) /
                                double(walks));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ldp::oracle
