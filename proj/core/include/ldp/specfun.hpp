#pragma once

#include <cstdint>

namespace ldp::specfun {

struct SpecialValue {
    double value = 0.0;
    double abs_error_bound = 0.0;
};

// Gamma function for real x outside the poles {0, -1, -2, ...}.
// Throws std::domain_error at poles and std::range_error past the double
// overflow threshold (|value| would exceed ~1.8e308, i.e. x > 171.62).
double gamma_fn(double x);

// log|Gamma(x)| for x > 0, accurate for large arguments.
double log_gamma(double x);

// Riemann zeta on s > 1. Throws std::domain_error for s <= 1.
double riemann_zeta(double s);

// Zeta continued to real s != 1 (used by the polylog expansion near z = 1).
double zeta_continued(double s);

// Polylogarithm Li_s(z) for order s > 1 and z in [0, 1].
// Direct series below z = 0.99, zeta-expansion branch at and above.
double polylog(double s, double z);

// Li_s(z) - zeta(s) at full relative accuracy for z in (0, 1], s > 1
// non-integer. This is the quantity model transforms consume near z = 1,
// where computing the difference of the two large halves would lose all
// precision.
double polylog_minus_zeta(double s, double z);

// Upper incomplete gamma Gamma(a, x) for x > 0 and real a (negative a
// reached by the recurrence in a). Throws std::domain_error for x <= 0.
double upper_incomplete_gamma(double a, double x);

// Checked variants carrying a conservative absolute error bound.
SpecialValue gamma_checked(double x);
SpecialValue riemann_zeta_checked(double s);
SpecialValue upper_incomplete_gamma_checked(double a, double x);

}  // namespace ldp::specfun
