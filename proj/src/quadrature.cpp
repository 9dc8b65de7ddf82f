#include "flowfwd/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flowfwd {

QuadRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    if (!(a < b)) throw std::invalid_argument("gauss_legendre: empty interval");

    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int m = (n + 1) / 2;  // roots come in +/- pairs on [-1, 1]

    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess for the i-th root of P_n
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0;; ++iter) {
            // evaluate P_n(z) and P_n'(z) via the three-term recurrence
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
            if (iter > 100) throw std::runtime_error("gauss_legendre: Newton iteration stalled");
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

}  // namespace flowfwd
