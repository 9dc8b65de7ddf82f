#include "flowfwd/forward_model.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace flowfwd {

void NoiseSpec::validate(int basis_size) const {
    if (kind == NoiseKind::OneDim) {
        if (dim != 1) throw std::invalid_argument("NoiseSpec: one-dim noise has dim 1");
    } else {
        if (dim < 1 || dim > basis_size)
            throw std::invalid_argument("NoiseSpec: factor count must be in [1, basis size]");
        if (time_steps < 1) throw std::invalid_argument("NoiseSpec: need at least one time step");
    }
}

void ContractSpec::validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("ContractSpec: tau must be positive");
    if (!(tau <= maturity_lo))
        throw std::invalid_argument("ContractSpec: tau must not exceed delivery start");
    if (!(maturity_lo < maturity_hi))
        throw std::invalid_argument("ContractSpec: delivery window is empty");
    if (!(strike > 0.0)) throw std::invalid_argument("ContractSpec: strike must be positive");
    if (!std::isfinite(rate)) throw std::invalid_argument("ContractSpec: rate must be finite");
    if (quad_points < 2) throw std::invalid_argument("ContractSpec: need at least 2 quad points");
}

double drift_value(const OrthonormalBasis& basis, const NoiseSpec& noise, double xi, double tau) {
    noise.validate(basis.size());
    if (noise.kind == NoiseKind::OneDim) return -0.5 * tau;
    const int L = noise.time_steps;
    const double ds = tau / L;
    double acc = 0.0;
    for (int j = 1; j <= L; ++j) {
        const double arg = xi + tau - j * ds;
        for (int i = 1; i <= noise.dim; ++i) {
            const double e = basis.eval(i, arg);
            acc += e * e;
        }
    }
    return -0.5 * acc * ds;
}

QuadRule delivery_rule(const ContractSpec& contract) {
    contract.validate();
    return gauss_legendre(contract.quad_points, contract.maturity_lo - contract.tau,
                          contract.maturity_hi - contract.tau);
}

CurveSimulator::CurveSimulator(const OrthonormalBasis& basis, const NoiseSpec& noise, double tau,
                               std::vector<double> grid)
    : basis_size_(basis.size()),
      noise_(noise),
      tau_(tau),
      sqrt_tau_(std::sqrt(tau)),
      grid_(std::move(grid)) {
    noise_.validate(basis_size_);
    if (!(tau > 0.0)) throw std::invalid_argument("CurveSimulator: tau must be positive");
    if (grid_.empty()) throw std::invalid_argument("CurveSimulator: empty grid");
    for (double g : grid_)
        if (g < 0.0) throw std::invalid_argument("CurveSimulator: negative relative maturity");

    const std::size_t G = grid_.size();
    basis_shift_.resize(static_cast<std::size_t>(basis_size_) * G);
    std::vector<double> vals(basis_size_);
    for (std::size_t g = 0; g < G; ++g) {
        basis.eval_all(grid_[g] + tau_, vals);
        for (int k = 0; k < basis_size_; ++k) basis_shift_[k * G + g] = vals[k];
    }

    drift_.assign(G, 0.0);
    if (noise_.kind == NoiseKind::OneDim) {
        normal_count_ = 1;
        drift_.assign(G, -0.5 * tau_);
    } else {
        const int d = noise_.dim;
        const int L = noise_.time_steps;
        normal_count_ = d * L;
        const double ds = tau_ / L;
        const double sqrt_ds = std::sqrt(ds);
        noise_tab_.resize(static_cast<std::size_t>(normal_count_) * G);
        for (int j = 1; j <= L; ++j) {
            const double s = j * ds;
            for (int i = 1; i <= d; ++i) {
                double* row = noise_tab_.data() + (static_cast<std::size_t>(j - 1) * d + (i - 1)) * G;
                for (std::size_t g = 0; g < G; ++g) {
                    const double e = basis.eval(i, grid_[g] + tau_ - s);
                    row[g] = e * sqrt_ds;
                    drift_[g] -= 0.5 * e * e * ds;
                }
            }
        }
    }
}

void CurveSimulator::deterministic_part(std::span<const double> x, std::span<double> out) const {
    if (static_cast<int>(x.size()) != basis_size_)
        throw std::invalid_argument("CurveSimulator: coefficient count mismatch");
    const std::size_t G = grid_.size();
    if (out.size() != G) throw std::invalid_argument("CurveSimulator: output size mismatch");
    std::memcpy(out.data(), drift_.data(), G * sizeof(double));
    for (int k = 0; k < basis_size_; ++k) {
        const double xk = x[k];
        if (xk == 0.0) continue;
        const double* row = basis_shift_.data() + static_cast<std::size_t>(k) * G;
        for (std::size_t g = 0; g < G; ++g) out[g] += xk * row[g];
    }
}

void CurveSimulator::add_noise(std::span<const double> det, std::span<const double> z,
                               std::span<double> out) const {
    const std::size_t G = grid_.size();
    if (det.size() != G || out.size() != G)
        throw std::invalid_argument("CurveSimulator: curve buffer size mismatch");
    if (static_cast<int>(z.size()) != normal_count_)
        throw std::invalid_argument("CurveSimulator: draw buffer size mismatch");
    if (noise_.kind == NoiseKind::OneDim) {
        const double shift = sqrt_tau_ * z[0];
        for (std::size_t g = 0; g < G; ++g) out[g] = det[g] + shift;
        return;
    }
    if (det.data() != out.data()) std::memcpy(out.data(), det.data(), G * sizeof(double));
    for (int r = 0; r < normal_count_; ++r) {
        const double zr = z[r];
        const double* row = noise_tab_.data() + static_cast<std::size_t>(r) * G;
        for (std::size_t g = 0; g < G; ++g) out[g] += zr * row[g];
    }
}

void CurveSimulator::simulate(std::span<const double> x, Rng& rng, std::span<double> out,
                              std::span<double> zbuf) const {
    if (static_cast<int>(zbuf.size()) != normal_count_)
        throw std::invalid_argument("CurveSimulator: draw buffer size mismatch");
    std::vector<double> det(grid_.size());
    deterministic_part(x, det);
    rng.fill_normals(zbuf.data(), zbuf.size());
    add_noise(det, zbuf, out);
}

PayoffSampler::PayoffSampler(const OrthonormalBasis& basis, const NoiseSpec& noise,
                             const ContractSpec& contract)
    : contract_(contract),
      sim_(basis, noise, contract.tau,
           [&] {
               QuadRule r = delivery_rule(contract);
               return r.nodes;
           }()),
      discount_(std::exp(-contract.rate * contract.tau)) {
    const QuadRule r = delivery_rule(contract_);
    avg_weights_.resize(r.weights.size());
    for (std::size_t i = 0; i < r.weights.size(); ++i)
        avg_weights_[i] = r.weights[i] / contract_.window();
}

std::vector<double> PayoffSampler::deterministic_part(std::span<const double> x) const {
    std::vector<double> det(sim_.grid().size());
    sim_.deterministic_part(x, det);
    return det;
}

double PayoffSampler::forward_from_curve(std::span<const double> y) const {
    if (y.size() != avg_weights_.size())
        throw std::invalid_argument("PayoffSampler: log-curve sample size mismatch");
    double acc = 0.0;
    for (std::size_t g = 0; g < y.size(); ++g) acc += avg_weights_[g] * std::exp(y[g]);
    return acc;
}

double PayoffSampler::payoff(std::span<const double> det, std::span<const double> z,
                             std::span<double> ybuf) const {
    sim_.add_noise(det, z, ybuf);
    const double fwd = forward_from_curve(ybuf);
    const double intrinsic = fwd - contract_.strike;
    return intrinsic > 0.0 ? discount_ * intrinsic : 0.0;
}

double PayoffSampler::sample(std::span<const double> det, Rng& rng, std::span<double> zbuf,
                             std::span<double> ybuf) const {
    rng.fill_normals(zbuf.data(), zbuf.size());
    return payoff(det, zbuf, ybuf);
}

std::vector<double> simulate_log_forward(const OrthonormalBasis& basis, std::span<const double> x,
                                         const NoiseSpec& noise, const ContractSpec& contract,
                                         std::span<const double> grid, Rng& rng) {
    contract.validate();
    CurveSimulator sim(basis, noise, contract.tau,
                       std::vector<double>(grid.begin(), grid.end()));
    std::vector<double> out(grid.size());
    std::vector<double> zbuf(sim.normal_count());
    sim.simulate(x, rng, out, zbuf);
    return out;
}

double flow_forward_price(std::span<const double> y, const ContractSpec& contract) {
    contract.validate();
    if (static_cast<int>(y.size()) != contract.quad_points)
        throw std::invalid_argument("flow_forward_price: expected one value per quad point");
    const QuadRule r = delivery_rule(contract);
    double acc = 0.0;
    for (std::size_t g = 0; g < y.size(); ++g) acc += r.weights[g] * std::exp(y[g]);
    return acc / contract.window();
}

double sample_payoff(const OrthonormalBasis& basis, std::span<const double> x,
                     const NoiseSpec& noise, const ContractSpec& contract, Rng& rng) {
    const PayoffSampler sampler(basis, noise, contract);
    const std::vector<double> det = sampler.deterministic_part(x);
    std::vector<double> zbuf(sampler.normal_count());
    std::vector<double> ybuf(det.size());
    return sampler.sample(det, rng, zbuf, ybuf);
}

}  // namespace flowfwd
