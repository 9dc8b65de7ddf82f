#include "flowfwd/classical_net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "flowfwd/rng.hpp"

namespace flowfwd {

namespace {

double act_value(Activation a, double h) {
    switch (a) {
        case Activation::Tanh: return std::tanh(h);
        case Activation::Relu: return h > 0.0 ? h : 0.0;
        case Activation::Logistic: return 1.0 / (1.0 + std::exp(-h));
    }
    return 0.0;
}

// slope when the activation value is already known
double act_slope_from(Activation a, double h, double value) {
    switch (a) {
        case Activation::Tanh: return 1.0 - value * value;
        case Activation::Relu: return h > 0.0 ? 1.0 : 0.0;
        case Activation::Logistic: return value * (1.0 - value);
    }
    return 0.0;
}

}  // namespace

Activation activation_from_name(std::string_view name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "relu") return Activation::Relu;
    if (name == "logistic") return Activation::Logistic;
    throw std::invalid_argument("unknown activation '" + std::string(name) +
                                "' (want tanh, relu or logistic)");
}

std::string_view activation_name(Activation act) {
    switch (act) {
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Logistic: return "logistic";
    }
    return "?";
}

std::vector<double> grid_features(const OrthonormalBasis& basis, std::span<const double> coeffs,
                                  int grid_size, double xi_max) {
    if (grid_size < 2) throw std::invalid_argument("grid_features: need at least 2 grid points");
    if (!(xi_max > 0.0)) throw std::invalid_argument("grid_features: xi_max must be positive");
    std::vector<double> out(grid_size);
    for (int d = 0; d < grid_size; ++d)
        out[d] = basis.eval_curve(coeffs, d * xi_max / (grid_size - 1));
    return out;
}

ClassicalNet::ClassicalNet(int hidden, int grid_size, Activation act)
    : m_(hidden), d_(grid_size), act_(act) {
    if (hidden < 1) throw std::invalid_argument("ClassicalNet: need at least one hidden unit");
    if (grid_size < 1) throw std::invalid_argument("ClassicalNet: need at least one feature");
    params_.assign(static_cast<std::size_t>(m_) * (d_ + 2), 0.0);
}

ClassicalNet ClassicalNet::random_init(int hidden, int grid_size, Activation act,
                                       std::uint64_t seed) {
    ClassicalNet net(hidden, grid_size, act);
    Rng rng(seed);
    const double s = 1.0 / std::sqrt(static_cast<double>(grid_size));
    for (auto& p : net.params_) p = rng.uniform(-s, s);
    return net;
}

double ClassicalNet::forward(std::span<const double> features) const {
    if (static_cast<int>(features.size()) != d_)
        throw std::invalid_argument("ClassicalNet: feature size mismatch");
    const double* W = params_.data();
    const double* b = W + static_cast<std::size_t>(m_) * d_;
    const double* v = b + m_;
    double out = 0.0;
    for (int k = 0; k < m_; ++k) {
        double h = b[k];
        const double* row = W + static_cast<std::size_t>(k) * d_;
        for (int q = 0; q < d_; ++q) h += row[q] * features[q];
        out += v[k] * act_value(act_, h);
    }
    return out;
}

double ClassicalNet::accumulate_loss_grad(std::span<const double> features, double target,
                                          std::span<double> grad, double scale) const {
    if (static_cast<int>(features.size()) != d_)
        throw std::invalid_argument("ClassicalNet: feature size mismatch");
    if (grad.size() != params_.size())
        throw std::invalid_argument("ClassicalNet: gradient buffer size mismatch");

    thread_local std::vector<double> h, a;
    h.resize(m_);
    a.resize(m_);
    const double* W = params_.data();
    const double* b = W + static_cast<std::size_t>(m_) * d_;
    const double* v = b + m_;
    double f = 0.0;
    for (int k = 0; k < m_; ++k) {
        double hk = b[k];
        const double* row = W + static_cast<std::size_t>(k) * d_;
        for (int q = 0; q < d_; ++q) hk += row[q] * features[q];
        h[k] = hk;
        a[k] = act_value(act_, hk);
        f += v[k] * a[k];
    }
    const double err = f - target;
    const double factor = 2.0 * err * scale;

    double* gW = grad.data();
    double* gb = gW + static_cast<std::size_t>(m_) * d_;
    double* gv = gb + m_;
    for (int k = 0; k < m_; ++k) {
        gv[k] += factor * a[k];
        const double common = factor * v[k] * act_slope_from(act_, h[k], a[k]);
        if (common == 0.0) continue;
        double* row = gW + static_cast<std::size_t>(k) * d_;
        for (int q = 0; q < d_; ++q) row[q] += common * features[q];
        gb[k] += common;
    }
    return err * err;
}

}  // namespace flowfwd
