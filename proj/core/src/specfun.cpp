#include "ldp/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ldp::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(pi*x) with argument reduction done on x itself, so large |x| keeps
// full accuracy where std::sin(pi*x) would lose it.
double sinpi(double x) {
    double r = std::remainder(x, 2.0);
    double s = 1.0;
    if (r > 1.0) {
        r -= 1.0;
        s = -1.0;
    } else if (r < -1.0) {
        r += 1.0;
        s = -1.0;
    }
    return s * std::sin(kPi * r);
}

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_sum(double x) {
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x - 1.0 + i);
    return a;
}

double gamma_positive(double x) {
    const double t = x + kLanczosG - 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, x - 0.5) * std::exp(-t) * lanczos_sum(x);
}

bool near_nonpositive_integer(double x, double* nearest) {
    const double r = std::round(x);
    if (r > 0.5) return false;
    *nearest = r;
    return std::abs(x - r) < 1e-13 * std::max(1.0, std::abs(x));
}

constexpr int kZetaN = 24;
// B_{2j} / (2j)! for j = 1..14.
constexpr double kBernOverFact[15] = {
    0.0,
    8.3333333333333333e-02,
    -1.3888888888888889e-03,
    3.3068783068783069e-05,
    -8.2671957671957672e-07,
    2.0876756987868099e-08,
    -5.2841901386874932e-10,
    1.3382536530684679e-11,
    -3.3896802963225829e-13,
    8.5860620562778446e-15,
    -2.1748686985580619e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
    3.5347070396294675e-21,
    -8.9535174270375469e-23,
};

// Euler-Maclaurin evaluation, analytic for every real s != 1; accuracy is
// excellent for s >= 0.5 which is the only range this is called on.
double zeta_em(double s) {
    double acc = 0.0;
    for (int k = kZetaN - 1; k >= 1; --k) acc += std::pow(double(k), -s);
    acc += std::pow(double(kZetaN), 1.0 - s) / (s - 1.0);
    acc += 0.5 * std::pow(double(kZetaN), -s);
    double poch = s;
    double npow = std::pow(double(kZetaN), -s - 1.0);
    const double inv_n2 = 1.0 / (double(kZetaN) * kZetaN);
    for (int j = 1; j <= 14; ++j) {
        const double term = kBernOverFact[j] * poch * npow;
        acc += term;
        if (std::abs(term) < 1e-18 * std::abs(acc)) break;
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        npow *= inv_n2;
    }
    return acc;
}

double polylog_series(double s, double z) {
    double acc = 0.0;
    double zk = 1.0;
    for (std::uint64_t k = 1; k <= 20000000; ++k) {
        zk *= z;
        const double term = zk * std::pow(double(k), -s);
        acc += term;
        if (term < 1e-17 * acc) break;
    }
    return acc;
}

// Li_s(z) - zeta(s) for non-integer s via the log-expansion around z = 1;
// valid for |ln z| < 2*pi, used for z >= 0.5.
double polylog_increment_expansion(double s, double z) {
    const double mu = std::log(z);
    double acc = gamma_fn(1.0 - s) * std::pow(-mu, s - 1.0);
    double mun = 1.0;
    double factorial = 1.0;
    for (int n = 1; n <= 48; ++n) {
        mun *= mu;
        factorial *= n;
        const double term = zeta_continued(s - n) * mun / factorial;
        acc += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(acc)) && n > 4) break;
    }
    return acc;
}

// Li_m(z) for integer m >= 2 via the integer-order log-expansion; needed so
// the branch point z >= 0.99 stays usable at integer orders.
double polylog_integer_order(int m, double z) {
    const double mu = std::log(z);
    double harmonic = 0.0;
    for (int i = 1; i < m; ++i) harmonic += 1.0 / i;
    double mun = 1.0;
    double factorial = 1.0;
    double acc = 0.0;
    for (int n = 0; n <= 64; ++n) {
        if (n > 0) {
            mun *= mu;
            factorial *= n;
        }
        double term;
        if (n == m - 1) {
            term = mun / factorial * (harmonic - std::log(-mu));
        } else {
            term = zeta_continued(double(m - n)) * mun / factorial;
        }
        acc += term;
        if (n > m + 4 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(acc))) break;
    }
    return acc;
}

double gamma_cf_upper(double a, double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 400; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x)) * h;
}

double gamma_series_upper(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n <= 600; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    const double lower = std::exp(-x + a * std::log(x)) * sum;
    return gamma_fn(a) - lower;
}

}  // namespace

double gamma_fn(double x) {
    if (std::isnan(x)) throw std::domain_error("gamma_fn: nan argument");
    double pole;
    if (near_nonpositive_integer(x, &pole))
        throw std::domain_error("gamma_fn: pole at nonpositive integer " + std::to_string(pole));
    if (x > 171.62) throw std::range_error("gamma_fn: overflow for x > 171.62");
    if (x >= 0.5) return gamma_positive(x);
    const double denom = sinpi(x) * gamma_positive(1.0 - x);
    if (denom == 0.0) throw std::range_error("gamma_fn: reflection underflow");
    return kPi / denom;
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    if (x < 0.5) return std::log(kPi / sinpi(x)) - log_gamma(1.0 - x);
    const double t = x + kLanczosG - 0.5;
    return 0.5 * std::log(2.0 * kPi) + (x - 0.5) * std::log(t) - t + std::log(lanczos_sum(x));
}

double riemann_zeta(double s) {
    if (!(s > 1.0)) throw std::domain_error("riemann_zeta: requires s > 1");
    return zeta_em(s);
}

double zeta_continued(double s) {
    if (s == 1.0) throw std::domain_error("zeta_continued: pole at s = 1");
    if (s == 0.0) return -0.5;
    if (s >= 0.5) return zeta_em(s);
    return std::pow(2.0, s) * std::pow(kPi, s - 1.0) * sinpi(0.5 * s) * gamma_fn(1.0 - s) *
           zeta_em(1.0 - s);
}

double polylog(double s, double z) {
    if (!(s > 1.0)) throw std::domain_error("polylog: requires order s > 1");
    if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("polylog: requires z in [0, 1]");
    if (z == 0.0) return 0.0;
    if (z == 1.0) return zeta_em(s);
    if (z < 0.99) return polylog_series(s, z);
    const double rounded = std::round(s);
    if (std::abs(s - rounded) < 1e-6) {
        if (z <= 0.999) return polylog_series(s, z);
        return polylog_integer_order(int(rounded), z);
    }
    return zeta_em(s) + polylog_increment_expansion(s, z);
}

double polylog_minus_zeta(double s, double z) {
    if (!(s > 1.0)) throw std::domain_error("polylog_minus_zeta: requires order s > 1");
    if (!(z > 0.0 && z <= 1.0)) throw std::domain_error("polylog_minus_zeta: requires z in (0, 1]");
    if (std::abs(s - std::round(s)) < 1e-6)
        throw std::domain_error("polylog_minus_zeta: integer order not supported");
    if (z == 1.0) return 0.0;
    if (z >= 0.5) return polylog_increment_expansion(s, z);
    return polylog_series(s, z) - zeta_em(s);
}

double upper_incomplete_gamma(double a, double x) {
    if (!(x > 0.0)) throw std::domain_error("upper_incomplete_gamma: requires x > 0");
    if (a <= 0.0 && std::abs(a - std::round(a)) < 1e-13)
        throw std::domain_error("upper_incomplete_gamma: nonpositive integer a not supported");
    if (x >= 1.5 + std::abs(a)) return gamma_cf_upper(a, x);
    if (a > 0.0) return gamma_series_upper(a, x);
    const int k = int(std::floor(-a)) + 1;
    const double a0 = a + k;
    double g = (x >= 1.5 + std::abs(a0)) ? gamma_cf_upper(a0, x) : gamma_series_upper(a0, x);
    for (int i = 1; i <= k; ++i) {
        const double ai = a0 - i;
        g = (g - std::exp(ai * std::log(x) - x)) / ai;
    }
    return g;
}

SpecialValue gamma_checked(double x) {
    const double v = gamma_fn(x);
    return {v, 2e-13 * std::abs(v) + 1e-305};
}

SpecialValue riemann_zeta_checked(double s) {
    const double v = riemann_zeta(s);
    return {v, 1e-14 * std::abs(v) + 1e-305};
}

SpecialValue upper_incomplete_gamma_checked(double a, double x) {
    const double v = upper_incomplete_gamma(a, x);
    double bound = 5e-13 * std::abs(v);
    if (a < 0.0 && x < 1.5 + std::abs(a)) bound += 1e-13 * std::exp(a * std::log(x) - x);
    return {v, bound + 1e-305};
}

}  // namespace ldp::specfun
