#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "flowfwd/basis.hpp"

namespace flowfwd {

enum class Activation { Tanh, Relu, Logistic };

Activation activation_from_name(std::string_view name);
std::string_view activation_name(Activation act);

// The baseline's view of a curve: its values at grid_size equally spaced
// maturities 0, xi_max/(D-1), ..., xi_max.
std::vector<double> grid_features(const OrthonormalBasis& basis, std::span<const double> coeffs,
                                  int grid_size, double xi_max);

// Plain one-hidden-layer regressor on grid features:
// f(u) = sum_k v_k act(W_k . u + b_k). Trainable count: hidden * (D + 2).
class ClassicalNet {
  public:
    ClassicalNet(int hidden, int grid_size, Activation act = Activation::Tanh);
    static ClassicalNet random_init(int hidden, int grid_size, Activation act, std::uint64_t seed);

    int hidden() const { return m_; }
    int input_dim() const { return d_; }
    Activation activation() const { return act_; }
    std::size_t param_count() const { return params_.size(); }

    // layout: W (hidden x D row-major), then b, then v
    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }

    double forward(std::span<const double> features) const;
    double accumulate_loss_grad(std::span<const double> features, double target,
                                std::span<double> grad, double scale) const;

  private:
    int m_, d_;
    Activation act_;
    std::vector<double> params_;
};

}  // namespace flowfwd
