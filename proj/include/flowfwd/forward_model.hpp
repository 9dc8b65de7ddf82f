#pragma once

#include <span>
#include <vector>

#include "flowfwd/basis.hpp"
#include "flowfwd/quadrature.hpp"
#include "flowfwd/rng.hpp"

namespace flowfwd {

class Rng;

enum class NoiseKind { OneDim, MultiDim };

// Which volatility operator drives the log-curve.
//
// OneDim:   a single Brownian motion moves the whole curve in parallel
//           (constant volatility 1 on the level); the drift correction is
//           the exact -tau/2.
// MultiDim: dim independent Brownian motions, factor i loading on basis
//           element e_i; the stochastic convolution and its variance drift
//           are discretized on time_steps right-endpoint steps.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::OneDim;
    int dim = 1;
    int time_steps = 0;

    static NoiseSpec one_dim() { return {NoiseKind::OneDim, 1, 0}; }
    static NoiseSpec multi_dim(int dim = 7, int time_steps = 100) {
        return {NoiseKind::MultiDim, dim, time_steps};
    }

    void validate(int basis_size) const;
};

// A call on the flow forward delivering over [T1, T2], priced at time-to-
// maturity tau <= T1. quad_points is the Gauss-Legendre resolution of the
// delivery average.
struct ContractSpec {
    double tau = 1.0 / 12.0;
    double maturity_lo = 1.0 / 12.0;   // T1
    double maturity_hi = 2.0 / 12.0;   // T2
    double strike = 1.0;
    double rate = 0.0;
    int quad_points = 64;

    double window() const { return maturity_hi - maturity_lo; }
    void validate() const;
};

// Drift of the log-curve at relative maturity xi, horizon tau. OneDim is the
// exact -tau/2; MultiDim is the right-endpoint discretized variance term
// -(1/2) sum_j sum_i e_i(xi + tau - s_j)^2 ds, matching the simulator.
double drift_value(const OrthonormalBasis& basis, const NoiseSpec& noise, double xi, double tau);

// Quadrature rule over the delivery window shifted to time tau,
// [T1 - tau, T2 - tau].
QuadRule delivery_rule(const ContractSpec& contract);

// Simulates the time-tau log-curve Y(tau, .) on a fixed grid of relative
// maturities. All grid points share one noise draw (the curve moves as one
// object); the deterministic part is precomputed per x so repeated draws are
// cheap.
class CurveSimulator {
  public:
    CurveSimulator(const OrthonormalBasis& basis, const NoiseSpec& noise, double tau,
                   std::vector<double> grid);

    const std::vector<double>& grid() const { return grid_; }
    int coeff_count() const { return basis_size_; }
    // normals consumed per draw
    int normal_count() const { return normal_count_; }

    // transported curve + drift on the grid; out.size() == grid().size()
    void deterministic_part(std::span<const double> x, std::span<double> out) const;

    // out[g] = det[g] + noise load of the standard-normal vector z
    void add_noise(std::span<const double> det, std::span<const double> z,
                   std::span<double> out) const;

    // one full draw; zbuf must hold normal_count() entries
    void simulate(std::span<const double> x, Rng& rng, std::span<double> out,
                  std::span<double> zbuf) const;

  private:
    int basis_size_;
    int normal_count_;
    NoiseSpec noise_;
    double tau_;
    double sqrt_tau_;
    std::vector<double> grid_;
    std::vector<double> basis_shift_;  // [k][g] = e_k(grid[g] + tau)
    std::vector<double> drift_;        // [g]
    std::vector<double> noise_tab_;    // MultiDim: [(j-1)*dim + (i-1)][g] = e_i(g + tau - s_j) sqrt(ds)
};

// Discounted-call machinery on top of CurveSimulator, on the delivery grid.
class PayoffSampler {
  public:
    PayoffSampler(const OrthonormalBasis& basis, const NoiseSpec& noise,
                  const ContractSpec& contract);

    const ContractSpec& contract() const { return contract_; }
    const CurveSimulator& simulator() const { return sim_; }
    int normal_count() const { return sim_.normal_count(); }

    std::vector<double> deterministic_part(std::span<const double> x) const;

    // delivery average of exp(y) -- the flow forward price given the log-curve
    double forward_from_curve(std::span<const double> y) const;

    // discounted call payoff for one z draw; ybuf holds quad_points entries
    double payoff(std::span<const double> det, std::span<const double> z,
                  std::span<double> ybuf) const;
    double sample(std::span<const double> det, Rng& rng, std::span<double> zbuf,
                  std::span<double> ybuf) const;

  private:
    ContractSpec contract_;
    CurveSimulator sim_;
    std::vector<double> avg_weights_;  // delivery weights / window
    double discount_;
};

// One draw of the log-curve on an arbitrary grid (convenience wrapper).
std::vector<double> simulate_log_forward(const OrthonormalBasis& basis, std::span<const double> x,
                                         const NoiseSpec& noise, const ContractSpec& contract,
                                         std::span<const double> grid, Rng& rng);

// Delivery average of exp(y) for y sampled on the contract's delivery rule;
// y.size() must equal contract.quad_points.
double flow_forward_price(std::span<const double> y, const ContractSpec& contract);

// One discounted payoff draw e^{-r tau} max(F - K, 0).
double sample_payoff(const OrthonormalBasis& basis, std::span<const double> x,
                     const NoiseSpec& noise, const ContractSpec& contract, Rng& rng);

}  // namespace flowfwd
