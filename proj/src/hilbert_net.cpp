#include "flowfwd/hilbert_net.hpp"

#include <cmath>
#include <stdexcept>

#include "flowfwd/rng.hpp"

namespace flowfwd {

HilbertNet::HilbertNet(int nodes, int dim) : m_(nodes), n_(dim) {
    if (nodes < 1) throw std::invalid_argument("HilbertNet: need at least one node");
    if (dim < 1) throw std::invalid_argument("HilbertNet: need at least one input dim");
    params_.assign(static_cast<std::size_t>(m_) * (n_ * n_ + 2 * n_), 0.0);
    psi_.assign(n_, 1.0 / std::sqrt(static_cast<double>(n_)));
    z_.assign(n_, 0.0);
    z_[0] = 1.0;  // read out the level direction
}

HilbertNet HilbertNet::random_init(int nodes, int dim, std::uint64_t seed) {
    HilbertNet net(nodes, dim);
    Rng rng(seed);
    const double s = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto& p : net.params_) p = rng.uniform(-s, s);
    return net;
}

std::span<double> HilbertNet::weight_mat(int j) {
    return {params_.data() + static_cast<std::size_t>(j) * n_ * n_,
            static_cast<std::size_t>(n_) * n_};
}
std::span<double> HilbertNet::bias_vec(int j) {
    return {params_.data() + static_cast<std::size_t>(m_) * n_ * n_ +
                static_cast<std::size_t>(j) * n_,
            static_cast<std::size_t>(n_)};
}
std::span<double> HilbertNet::readout_vec(int j) {
    return {params_.data() + static_cast<std::size_t>(m_) * (n_ * n_ + n_) +
                static_cast<std::size_t>(j) * n_,
            static_cast<std::size_t>(n_)};
}
std::span<const double> HilbertNet::weight_mat(int j) const {
    return const_cast<HilbertNet*>(this)->weight_mat(j);
}
std::span<const double> HilbertNet::bias_vec(int j) const {
    return const_cast<HilbertNet*>(this)->bias_vec(j);
}
std::span<const double> HilbertNet::readout_vec(int j) const {
    return const_cast<HilbertNet*>(this)->readout_vec(j);
}

void HilbertNet::set_psi(std::span<const double> psi) {
    if (static_cast<int>(psi.size()) != n_)
        throw std::invalid_argument("HilbertNet: psi size mismatch");
    psi_.assign(psi.begin(), psi.end());
}
void HilbertNet::set_z(std::span<const double> z) {
    if (static_cast<int>(z.size()) != n_) throw std::invalid_argument("HilbertNet: z size mismatch");
    z_.assign(z.begin(), z.end());
}

void HilbertNet::check_x(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("HilbertNet: input size mismatch");
}

double HilbertNet::preactivation(int j, std::span<const double> x) const {
    check_x(x);
    if (j < 0 || j >= m_) throw std::invalid_argument("HilbertNet: node index out of range");
    const double* A = params_.data() + static_cast<std::size_t>(j) * n_ * n_;
    const double* b = bias_vec(j).data();
    double acc = 0.0;
    for (int p = 0; p < n_; ++p) {
        double row = b[p];
        for (int q = 0; q < n_; ++q) row += A[p * n_ + q] * x[q];
        acc += psi_[p] * row;
    }
    return acc;
}

double HilbertNet::readout_weight(int j) const {
    const auto ell = readout_vec(j);
    double acc = 0.0;
    for (int p = 0; p < n_; ++p) acc += ell[p] * z_[p];
    return acc;
}

double HilbertNet::forward(std::span<const double> x) const {
    check_x(x);
    double out = 0.0;
    for (int j = 0; j < m_; ++j)
        out += beta_activation(preactivation(j, x)) * readout_weight(j);
    return out;
}

double HilbertNet::accumulate_loss_grad(std::span<const double> x, double target,
                                        std::span<double> grad, double scale) const {
    check_x(x);
    if (grad.size() != params_.size())
        throw std::invalid_argument("HilbertNet: gradient buffer size mismatch");

    thread_local std::vector<double> pre;
    pre.resize(m_);
    double f = 0.0;
    for (int j = 0; j < m_; ++j) {
        pre[j] = preactivation(j, x);
        f += beta_activation(pre[j]) * readout_weight(j);
    }
    const double err = f - target;
    const double factor = 2.0 * err * scale;

    const std::size_t a_block = static_cast<std::size_t>(m_) * n_ * n_;
    const std::size_t b_block = a_block + static_cast<std::size_t>(m_) * n_;
    for (int j = 0; j < m_; ++j) {
        const double act = beta_activation(pre[j]);
        const double slope = beta_activation_deriv(pre[j]);
        // readout part: d f / d ell_j = beta(pre_j) z
        double* gl = grad.data() + b_block + static_cast<std::size_t>(j) * n_;
        for (int p = 0; p < n_; ++p) gl[p] += factor * act * z_[p];
        if (slope == 0.0) continue;  // dead node for this sample
        const double common = factor * readout_weight(j) * slope;
        // d f / d A_j[p][q] = slope * w_j * psi_p x_q ; d f / d b_j[p] = slope * w_j * psi_p
        double* ga = grad.data() + static_cast<std::size_t>(j) * n_ * n_;
        double* gb = grad.data() + a_block + static_cast<std::size_t>(j) * n_;
        for (int p = 0; p < n_; ++p) {
            const double cp = common * psi_[p];
            for (int q = 0; q < n_; ++q) ga[p * n_ + q] += cp * x[q];
            gb[p] += cp;
        }
    }
    return err * err;
}

std::vector<double> HilbertNet::input_gradient(std::span<const double> x) const {
    check_x(x);
    std::vector<double> out(n_, 0.0);
    for (int j = 0; j < m_; ++j) {
        const double slope = beta_activation_deriv(preactivation(j, x));
        if (slope == 0.0) continue;
        const double common = slope * readout_weight(j);
        const double* A = params_.data() + static_cast<std::size_t>(j) * n_ * n_;
        // d pre_j / d x_q = (A_j^T psi)_q
        for (int p = 0; p < n_; ++p) {
            const double cp = common * psi_[p];
            for (int q = 0; q < n_; ++q) out[q] += cp * A[p * n_ + q];
        }
    }
    return out;
}

double HilbertNet::level_delta(std::span<const double> x) const { return input_gradient(x)[0]; }

NetGradient net_gradient(const HilbertNet& net, std::span<const double> x, double target) {
    NetGradient g;
    g.wrt_params.assign(net.param_count(), 0.0);
    net.accumulate_loss_grad(x, target, g.wrt_params, 1.0);
    g.wrt_input = net.input_gradient(x);
    return g;
}

}  // namespace flowfwd
