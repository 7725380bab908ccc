#include "ldp/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ldp::kernels {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

double tap(const MemoryKernel& kernel, std::uint64_t i) {
    switch (kernel.kind) {
        case KernelKind::exponential:
            return std::pow(kernel.decay, double(i));
        case KernelKind::algebraic:
            return std::pow(1.0 + double(i), -kernel.nu);
        case KernelKind::custom:
            return i < kernel.custom.size() ? kernel.custom[i] : 0.0;
    }
    return 0.0;
}

}  // namespace

MemoryKernel MemoryKernel::exponential(double decay) {
    require(decay > 0.0 && decay < 1.0, "exponential kernel: decay must lie in (0,1)");
    MemoryKernel k;
    k.kind = KernelKind::exponential;
    k.decay = decay;
    return k;
}

MemoryKernel MemoryKernel::algebraic(double nu) {
    require(nu > 0.0 && nu < 1.0, "algebraic kernel: nu must lie in (0,1)");
    MemoryKernel k;
    k.kind = KernelKind::algebraic;
    k.nu = nu;
    return k;
}

MemoryKernel MemoryKernel::custom_taps(std::vector<double> taps) {
    require(!taps.empty(), "custom kernel: needs at least one tap");
    require(taps[0] > 0.0, "custom kernel: m_0 must be positive");
    for (double m : taps) require(m >= 0.0, "custom kernel: taps must be nonnegative");
    MemoryKernel k;
    k.kind = KernelKind::custom;
    k.custom = std::move(taps);
    return k;
}

std::string MemoryKernel::describe() const {
    char buf[64];
    switch (kind) {
        case KernelKind::exponential:
            std::snprintf(buf, sizeof buf, "exponential(decay=%g)", decay);
            break;
        case KernelKind::algebraic:
            std::snprintf(buf, sizeof buf, "algebraic(nu=%g)", nu);
            break;
        case KernelKind::custom:
            std::snprintf(buf, sizeof buf, "custom(taps=%zu)", custom.size());
            break;
    }
    return buf;
}

std::vector<double> weights(const MemoryKernel& kernel, std::uint64_t n) {
    require(n >= 1, "weights: n must be >= 1");
    std::vector<double> w(n);
    double acc = 0.0;
    for (std::uint64_t j = 0; j < n; ++j) {
        acc += tap(kernel, j);
        w[j] = acc;
    }
    return w;
}

KernelNorming ldp_norming(const MemoryKernel& kernel, std::uint64_t n, double beta) {
    require(beta > 0.0 && beta < 2.0 && beta != 1.0, "ldp_norming: beta must lie in (0,1) or (1,2)");
    KernelNorming out;
    out.n = n;
    out.beta = beta;
    out.weights = weights(kernel, n);
    double acc = 0.0;
    for (std::uint64_t j = 0; j < n; ++j) acc += std::pow(out.weights[j], beta);
    out.L_n = acc;
    return out;
}

double scaling_exponent(const MemoryKernel& kernel, double beta,
                        const std::vector<std::uint64_t>& n_grid) {
    require(n_grid.size() >= 3, "scaling_exponent: needs at least 3 grid points");
    std::uint64_t n_max = 0;
    for (auto n : n_grid) n_max = std::max(n_max, n);
    const double cutoff = double(n_max) / 100.0;

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t used = 0;
    for (auto n : n_grid) {
        if (double(n) < cutoff) continue;
        const auto norm = ldp_norming(kernel, n, beta);
        const double x = std::log(double(n));
        const double y = std::log(norm.L_n);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    require(used >= 2, "scaling_exponent: top two decades of the grid hold fewer than 2 points");
    const double denom = double(used) * sxx - sx * sx;
    require(denom > 0.0, "scaling_exponent: grid points are not distinct");
    return (double(used) * sxy - sx * sy) / denom;
}

}  // namespace ldp::kernels
