#pragma once

#include <cstddef>
#include <vector>

namespace flowfwd {

// Gauss-Legendre rule mapped to [a, b]. Nodes are strictly interior.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

// n-point Gauss-Legendre rule on [a, b]. Nodes by Newton iteration on the
// Legendre recurrence; accurate to ~1 ulp for the n used here.
QuadRule gauss_legendre(int n, double a, double b);

}  // namespace flowfwd
