#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace flowfwd {

// Activation beta(y) = max(0, 1 - e^-y): bounded, increasing, kinked at 0.
inline double beta_activation(double y) {
    return y > 0.0 ? 1.0 - std::exp(-y) : 0.0;
}

// One-sided derivative; 0 at the kink itself.
inline double beta_activation_deriv(double y) { return y > 0.0 ? std::exp(-y) : 0.0; }

// Single-hidden-layer net acting on curve coefficients:
//
//   g(x) = sum_j beta(psi . (A_j x + b_j)) * (ell_j . z)
//
// psi (unit average direction) and z (level readout direction) are fixed,
// not trained; A_j, b_j, ell_j are. Trainable count: nodes * (N^2 + 2N).
class HilbertNet {
  public:
    HilbertNet(int nodes, int dim);
    static HilbertNet random_init(int nodes, int dim, std::uint64_t seed);

    int nodes() const { return m_; }
    int input_dim() const { return n_; }
    std::size_t param_count() const { return params_.size(); }

    // layout: all A_j (row-major N x N each), then all b_j, then all ell_j
    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }
    std::span<double> weight_mat(int j);
    std::span<double> bias_vec(int j);
    std::span<double> readout_vec(int j);
    std::span<const double> weight_mat(int j) const;
    std::span<const double> bias_vec(int j) const;
    std::span<const double> readout_vec(int j) const;

    std::span<const double> psi() const { return psi_; }
    std::span<const double> z_dir() const { return z_; }
    void set_psi(std::span<const double> psi);
    void set_z(std::span<const double> z);

    double preactivation(int j, std::span<const double> x) const;
    double readout_weight(int j) const;  // ell_j . z

    double forward(std::span<const double> x) const;

    // Adds scale * d/dtheta (forward(x) - target)^2 into grad (same layout as
    // params) and returns the squared error itself.
    double accumulate_loss_grad(std::span<const double> x, double target, std::span<double> grad,
                                double scale) const;

    // dg/dx -- the net's own curve sensitivity
    std::vector<double> input_gradient(std::span<const double> x) const;

    // dg/dx_1: sensitivity to a parallel shift of the whole curve
    double level_delta(std::span<const double> x) const;

  private:
    void check_x(std::span<const double> x) const;

    int m_, n_;
    std::vector<double> params_;
    std::vector<double> psi_, z_;
};

// Full gradient of the squared error at one sample, plus the input gradient.
struct NetGradient {
    std::vector<double> wrt_params;
    std::vector<double> wrt_input;
};
NetGradient net_gradient(const HilbertNet& net, std::span<const double> x, double target);

}  // namespace flowfwd
