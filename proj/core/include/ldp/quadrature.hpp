#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace ldp::quad {

struct Result {
    double value = 0.0;
    double error_bound = 0.0;
};

namespace detail {

inline constexpr double kKronrodNodes[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813,
};
inline constexpr double kKronrodWeights[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529,
};
inline constexpr double kGaussWeights[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
};

template <class F>
inline void kronrod15(F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    fv[0] = f(c);
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kKronrodNodes[i];
        fv[2 * i - 1] = f(c - dx);
        fv[2 * i] = f(c + dx);
    }
    double kron = kKronrodWeights[0] * fv[0];
    for (int i = 1; i < 8; ++i) kron += kKronrodWeights[i] * (fv[2 * i - 1] + fv[2 * i]);
    double gauss = kGaussWeights[0] * fv[0];
    for (int j = 1; j < 4; ++j) {
        const int i = 2 * j;
        gauss += kGaussWeights[j] * (fv[2 * i - 1] + fv[2 * i]);
    }
    value = kron * h;
    err = std::abs((kron - gauss) * h);
}

template <class F>
inline void adapt(F& f, double a, double b, double abs_tol, double rel_tol, int depth,
                  double& acc, double& acc_err) {
    double v = 0.0, e = 0.0;
    kronrod15(f, a, b, v, e);
    const double goal = std::max(abs_tol, rel_tol * std::abs(v));
    if (e <= goal * 0.25 || depth <= 0 || (b - a) < 1e-300) {
        acc += v;
        acc_err += e;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt(f, a, m, abs_tol * 0.5, rel_tol, depth - 1, acc, acc_err);
    adapt(f, m, b, abs_tol * 0.5, rel_tol, depth - 1, acc, acc_err);
}

}  // namespace detail

template <class F>
Result integrate(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-12,
                 int max_depth = 48) {
    Result r;
    if (!(b > a)) return r;
    detail::adapt(f, a, b, abs_tol, rel_tol, max_depth, r.value, r.error_bound);
    return r;
}

// Integrates f over [a, inf) by geometrically growing segments; stops once
// three consecutive segments contribute below the tolerance floor.
template <class F>
Result integrate_to_infinity(F&& f, double a, double abs_tol = 1e-12, double rel_tol = 1e-12) {
    Result r;
    double left = a;
    double h = std::max(1.0, 0.5 * std::abs(a));
    int quiet = 0;
    for (int seg = 0; seg < 220 && quiet < 3; ++seg) {
        Result part = integrate(f, left, left + h, abs_tol * 0.25, rel_tol * 0.25, 40);
        r.value += part.value;
        r.error_bound += part.error_bound;
        const double floor_ = std::max(abs_tol, rel_tol * std::abs(r.value));
        if (std::abs(part.value) < 0.25 * floor_)
            ++quiet;
        else
            quiet = 0;
        left += h;
        h *= 2.0;
    }
    return r;
}

// Gauss-Legendre rule of order n on [-1, 1]; nodes/weights are cached.
const std::vector<double>& gauss_legendre_nodes(int n);
const std::vector<double>& gauss_legendre_weights(int n);

}  // namespace ldp::quad
