#include "flowfwd/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "flowfwd/quadrature.hpp"

namespace flowfwd {

namespace {

// ascending-coefficient polynomial evaluation
double horner(std::span<const double> c, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

// r = p' - p, the polynomial part of d/dxi [p(xi) e^-xi] / e^-xi
std::vector<double> deriv_minus_self(std::span<const double> p) {
    std::vector<double> r(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i] -= p[i];
        if (i + 1 < p.size()) r[i] += (i + 1.0) * p[i + 1];
    }
    return r;
}

struct PolyPair {
    std::vector<double> q;  // e_k = q(xi) e^-xi
    std::vector<double> r;  // e_k' = r(xi) e^-xi
};

// exact Gram-Schmidt output over {1, xi^(k-2) e^-xi}
const std::vector<PolyPair>& standard_polys() {
    static const std::vector<PolyPair> polys = [] {
        std::vector<std::vector<double>> q = {
            {0.0, 1.0},
            {0.0, -1.0, 0.5},
            {0.0, 1.0, -1.0, 1.0 / 6.0},
            {0.0, -1.0, 1.5, -0.5, 1.0 / 24.0},
            {0.0, 1.0, -2.0, 1.0, -1.0 / 6.0, 1.0 / 120.0},
        };
        std::vector<PolyPair> out;
        for (auto& qi : q) out.push_back({qi, deriv_minus_self(qi)});
        return out;
    }();
    return polys;
}

// alternative published family for indices 5..7 (unit norm, not orthogonal)
const std::vector<PolyPair>& alt_polys() {
    static const std::vector<PolyPair> polys = [] {
        const double c5 = 1.0 / (42.0 * std::sqrt(5.0));
        const double c6 = 1.0 / (24.0 * std::sqrt(806115.0));
        const double c7 = 1.0 / (1560.0 * std::sqrt(49407661.0));
        std::vector<std::vector<double>> q = {
            {0.0, -6.0 * c5, -36.0 * c5, c5},
            {0.0, -24.0 * c6, -192.0 * c6, -1440.0 * c6, c6},
            {0.0, -120.0 * c7, -1200.0 * c7, -10800.0 * c7, -100800.0 * c7, c7},
        };
        std::vector<PolyPair> out;
        for (auto& qi : q) out.push_back({qi, deriv_minus_self(qi)});
        return out;
    }();
    return polys;
}

const PolyPair& poly_for(int i, OrthonormalBasis::Variant variant) {
    // i >= 3; Alt replaces 5..7 only
    if (variant == OrthonormalBasis::Variant::Alt && i >= 5) return alt_polys()[i - 5];
    return standard_polys()[i - 3];
}

const QuadRule& weighted_rule() {
    static const QuadRule rule = gauss_legendre(200, 0.0, 80.0);
    return rule;
}

}  // namespace

double inner_product_w(const RealFn& f, const RealFn& g) {
    const double boundary = f.value(0.0) * g.value(0.0);
    const double integral =
        weighted_rule().integrate([&](double x) { return weight(x) * f.deriv(x) * g.deriv(x); });
    return boundary + integral;
}

double norm_w(const RealFn& f) { return std::sqrt(inner_product_w(f, f)); }

double inner_product_w(const RealFn& f, const RealFn& g, std::span<const double> splits) {
    std::vector<double> cuts(splits.begin(), splits.end());
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> edges{0.0};
    for (double s : cuts)
        if (s > edges.back() && s < 80.0) edges.push_back(s);
    edges.push_back(80.0);

    double acc = f.value(0.0) * g.value(0.0);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const QuadRule panel = gauss_legendre(200, edges[p], edges[p + 1]);
        acc += panel.integrate([&](double x) { return weight(x) * f.deriv(x) * g.deriv(x); });
    }
    return acc;
}

RealFn riesz_fn(double xi) {
    return {[xi](double u) { return riesz_representer(xi, u); },
            [xi](double u) { return u < xi ? std::exp(-u) : 0.0; }};
}

std::vector<RealFn> generator_family(int n) {
    if (n < 1) throw std::invalid_argument("generator_family: need n >= 1");
    std::vector<RealFn> fns;
    fns.push_back({[](double) { return 1.0; }, [](double) { return 0.0; }});
    for (int i = 2; i <= n; ++i) {
        const int p = i - 2;  // xi^p e^-xi
        fns.push_back({[p](double xi) { return std::pow(xi, p) * std::exp(-xi); },
                       [p](double xi) {
                           const double e = std::exp(-xi);
                           if (p == 0) return -e;
                           return (p * std::pow(xi, p - 1) - std::pow(xi, p)) * e;
                       }});
    }
    return fns;
}

RealFn combine(std::span<const double> coeffs, const std::vector<RealFn>& fns) {
    if (coeffs.size() != fns.size())
        throw std::invalid_argument("combine: coefficient/function count mismatch");
    std::vector<double> c(coeffs.begin(), coeffs.end());
    return {[c, &fns](double xi) {
                double acc = 0.0;
                for (std::size_t j = 0; j < c.size(); ++j)
                    if (c[j] != 0.0) acc += c[j] * fns[j].value(xi);
                return acc;
            },
            [c, &fns](double xi) {
                double acc = 0.0;
                for (std::size_t j = 0; j < c.size(); ++j)
                    if (c[j] != 0.0) acc += c[j] * fns[j].deriv(xi);
                return acc;
            }};
}

std::vector<std::vector<double>> gram_schmidt_w(const std::vector<RealFn>& fns) {
    const std::size_t n = fns.size();
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> c(n, 0.0);
        c[i] = 1.0;
        // two projection passes: plain modified GS leaves O(kappa * eps)
        // residuals, the second pass mops them up
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < i; ++j) {
                const double proj = inner_product_w(combine(c, fns), combine(rows[j], fns));
                for (std::size_t k = 0; k < n; ++k) c[k] -= proj * rows[j][k];
            }
        }
        const double nrm = norm_w(combine(c, fns));
        if (nrm < 1e-6 * norm_w(fns[i]))
            throw std::runtime_error("gram_schmidt_w: function " + std::to_string(i) +
                                     " is numerically dependent on its predecessors");
        for (auto& ck : c) ck /= nrm;
        rows.push_back(std::move(c));
    }
    return rows;
}

OrthonormalBasis::OrthonormalBasis(int size, Variant variant) : size_(size), variant_(variant) {
    if (size < 1 || size > 7)
        throw std::invalid_argument("OrthonormalBasis: closed forms cover sizes 1..7");
}

double OrthonormalBasis::eval(int i, double xi) const {
    if (i < 1 || i > size_) throw std::invalid_argument("OrthonormalBasis::eval: index out of range");
    if (i == 1) return 1.0;
    const double e = std::exp(-xi);
    if (i == 2) return e - 1.0;
    return horner(poly_for(i, variant_).q, xi) * e;
}

double OrthonormalBasis::deriv(int i, double xi) const {
    if (i < 1 || i > size_)
        throw std::invalid_argument("OrthonormalBasis::deriv: index out of range");
    if (i == 1) return 0.0;
    const double e = std::exp(-xi);
    if (i == 2) return -e;
    return horner(poly_for(i, variant_).r, xi) * e;
}

void OrthonormalBasis::eval_all(double xi, std::span<double> out) const {
    if (static_cast<int>(out.size()) != size_)
        throw std::invalid_argument("OrthonormalBasis::eval_all: output size mismatch");
    out[0] = 1.0;
    if (size_ == 1) return;
    const double e = std::exp(-xi);
    out[1] = e - 1.0;
    for (int i = 3; i <= size_; ++i) out[i - 1] = horner(poly_for(i, variant_).q, xi) * e;
}

double OrthonormalBasis::eval_curve(std::span<const double> coeffs, double xi) const {
    if (static_cast<int>(coeffs.size()) != size_)
        throw std::invalid_argument("OrthonormalBasis::eval_curve: coefficient count mismatch");
    double acc = coeffs[0];
    if (size_ == 1) return acc;
    const double e = std::exp(-xi);
    acc += coeffs[1] * (e - 1.0);
    for (int i = 3; i <= size_; ++i) acc += coeffs[i - 1] * horner(poly_for(i, variant_).q, xi) * e;
    return acc;
}

double OrthonormalBasis::curve_deriv(std::span<const double> coeffs, double xi) const {
    if (static_cast<int>(coeffs.size()) != size_)
        throw std::invalid_argument("OrthonormalBasis::curve_deriv: coefficient count mismatch");
    if (size_ == 1) return 0.0;
    const double e = std::exp(-xi);
    double acc = coeffs[1] * -e;
    for (int i = 3; i <= size_; ++i) acc += coeffs[i - 1] * horner(poly_for(i, variant_).r, xi) * e;
    return acc;
}

RealFn OrthonormalBasis::element(int i) const {
    if (i < 1 || i > size_)
        throw std::invalid_argument("OrthonormalBasis::element: index out of range");
    const OrthonormalBasis self = *this;  // cheap copy; keeps the RealFn self-contained
    return {[self, i](double xi) { return self.eval(i, xi); },
            [self, i](double xi) { return self.deriv(i, xi); }};
}

}  // namespace flowfwd
