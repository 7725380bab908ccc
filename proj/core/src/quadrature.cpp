#include "ldp/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

namespace ldp::quad {

namespace {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Rule compute_rule(int n) {
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return rule;
}

std::mutex g_mutex;
std::map<int, Rule>& cache() {
    static std::map<int, Rule> c;
    return c;
}

const Rule& rule_for(int n) {
    std::lock_guard<std::mutex> lock(g_mutex);
    auto it = cache().find(n);
    if (it == cache().end()) it = cache().emplace(n, compute_rule(n)).first;
    return it->second;
}

}  // namespace

const std::vector<double>& gauss_legendre_nodes(int n) { return rule_for(n).nodes; }
const std::vector<double>& gauss_legendre_weights(int n) { return rule_for(n).weights; }

}  // namespace ldp::quad
