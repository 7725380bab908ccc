#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ldp::kernels {

enum class KernelKind { exponential, algebraic, custom };

struct MemoryKernel {
    KernelKind kind = KernelKind::exponential;
    double decay = 0.5;           // exponential: m_i = decay^i, decay in (0,1)
    double nu = 0.5;              // algebraic: m_i = (1+i)^(-nu), nu in (0,1)
    std::vector<double> custom;   // custom: m_0, m_1, ... (finite, nonnegative)

    static MemoryKernel exponential(double decay);
    static MemoryKernel algebraic(double nu);
    static MemoryKernel custom_taps(std::vector<double> taps);

    std::string describe() const;
};

struct KernelNorming {
    std::uint64_t n = 0;
    double beta = 0.0;
    double L_n = 0.0;
    std::vector<double> weights;
};

// Cumulative weights w_j = sum_{i<=j} m_i for j = 0..n-1.
std::vector<double> weights(const MemoryKernel& kernel, std::uint64_t n);

// L_n = sum_{k=1}^{n} w_{n-k}^beta together with the weights used.
KernelNorming ldp_norming(const MemoryKernel& kernel, std::uint64_t n, double beta);

// Least-squares slope of log L_n against log n over the top two decades of
// the supplied grid.
double scaling_exponent(const MemoryKernel& kernel, double beta,
                        const std::vector<std::uint64_t>& n_grid);

}  // namespace ldp::kernels
