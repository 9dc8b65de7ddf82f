#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace flowfwd {

// Weight of the curve space norm: |x|^2 = x(0)^2 + int_0^inf w(xi) x'(xi)^2 dxi.
inline double weight(double xi) { return std::exp(xi); }

// Representer of point evaluation: <h_xi, f> = f(xi) for every f in the space.
inline double riesz_representer(double xi, double u) {
    return 2.0 - std::exp(-std::min(xi, u));
}

// A function on [0, inf) carried together with its exact derivative, so the
// weighted inner product never needs finite differences.
struct RealFn {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
};

// f(0) g(0) + int_0^inf w f' g', by a fixed 200-node Gauss-Legendre rule on
// [0, 80]. The truncation tail is ~1e-16 for curves with e^-xi decay times a
// polynomial of degree <= 5, i.e. everything this engine produces.
double inner_product_w(const RealFn& f, const RealFn& g);
double norm_w(const RealFn& f);

// Same inner product, but the integration is split at the given interior
// points. Needed when an integrand has a kink, e.g. the point-evaluation
// representer (its u-derivative jumps at u = xi).
double inner_product_w(const RealFn& f, const RealFn& g, std::span<const double> splits);

// u -> riesz_representer(xi, u) with its a.e. derivative, ready for
// inner products (pass {xi} as the split list).
RealFn riesz_fn(double xi);

// The raw generator family the basis is built from: 1, then xi^(k-2) e^-xi.
std::vector<RealFn> generator_family(int n);

// Orthonormalize fns under the weighted inner product (modified Gram-Schmidt,
// one re-orthogonalization pass). Returns row-major coefficients C such that
// out_i = sum_j C[i][j] fns[j]. Throws if some fn is numerically dependent on
// its predecessors, naming the offending index.
std::vector<std::vector<double>> gram_schmidt_w(const std::vector<RealFn>& fns);

// Bundle a coefficient combination of fns into a single RealFn.
RealFn combine(std::span<const double> coeffs, const std::vector<RealFn>& fns);

// Closed-form orthonormal basis of the curve space, sizes 1..7.
//
// e_1 = 1, e_2 = e^-xi - 1, e_k = q_k(xi) e^-xi for k >= 3, with q_k the
// degree-(k-2) polynomials produced by exact Gram-Schmidt over the generator
// family (q_k' - q_k is a signed Laguerre polynomial).
//
// Variant::Alt swaps indices 5..7 for an alternative published family that is
// unit-norm but not mutually orthogonal; it is kept for comparison only.
class OrthonormalBasis {
  public:
    enum class Variant { Standard, Alt };

    explicit OrthonormalBasis(int size = 7, Variant variant = Variant::Standard);

    int size() const { return size_; }
    Variant variant() const { return variant_; }

    // e_i(xi), index 1-based; i must be in [1, size()]
    double eval(int i, double xi) const;
    // e_i'(xi), closed form
    double deriv(int i, double xi) const;

    // e_1(xi) .. e_n(xi) in one pass (shares the exp)
    void eval_all(double xi, std::span<double> out) const;

    // x(xi) for the curve with coefficients coeffs (size() entries)
    double eval_curve(std::span<const double> coeffs, double xi) const;
    double curve_deriv(std::span<const double> coeffs, double xi) const;

    // the basis element as a RealFn, for inner products
    RealFn element(int i) const;

  private:
    int size_;
    Variant variant_;
};

}  // namespace flowfwd
