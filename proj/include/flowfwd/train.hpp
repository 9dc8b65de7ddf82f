#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flowfwd/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flowfwd {

enum class Optimizer { Sgd, Adam };

Optimizer optimizer_from_name(std::string_view name);
std::string_view optimizer_name(Optimizer opt);

struct TrainConfig {
    int batch_size = 10000;
    int epochs = 50;
    double learning_rate = 1e-3;
    Optimizer optimizer = Optimizer::Adam;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;

    void validate() const {
        if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be positive");
        if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be positive");
        if (!(learning_rate > 0.0))
            throw std::invalid_argument("TrainConfig: learning_rate must be positive");
    }
};

struct TrainResult {
    std::vector<double> epoch_loss;  // mean squared training error per epoch
};

// Every batch is cut into this many index chunks; chunk partial gradients are
// summed in chunk order. That makes the batch gradient -- and the whole
// training run -- bitwise independent of the worker count.
inline constexpr int kGradChunks = 64;

// Mean-squared-error gradient of one batch (rows indexes into X), written to
// grad. Per-sample terms carry weight 1/rows.size(). Returns the sum of
// squared errors over the batch. chunk_buf is caller-owned scratch, resized
// here to kGradChunks * param_count.
template <class Net>
double batch_gradient(const Net& net, const double* X, const double* y,
                      std::span<const long long> rows, std::span<double> grad,
                      std::vector<double>& chunk_buf, int threads) {
    const std::size_t P = net.param_count();
    const int dim = net.input_dim();
    if (grad.size() != P) throw std::invalid_argument("batch_gradient: grad size mismatch");
    const long long B = static_cast<long long>(rows.size());
    if (B == 0) throw std::invalid_argument("batch_gradient: empty batch");
    const double scale = 1.0 / static_cast<double>(B);

    const int n_chunks = static_cast<int>(std::min<long long>(kGradChunks, B));
    chunk_buf.assign(static_cast<std::size_t>(n_chunks) * P, 0.0);
    std::vector<double> chunk_loss(n_chunks, 0.0);

#ifdef _OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#else
    (void)threads;
#endif
    for (int c = 0; c < n_chunks; ++c) {
        const long long lo = B * c / n_chunks;
        const long long hi = B * (c + 1) / n_chunks;
        std::span<double> g(chunk_buf.data() + static_cast<std::size_t>(c) * P, P);
        double loss = 0.0;
        for (long long k = lo; k < hi; ++k) {
            const long long r = rows[k];
            loss += net.accumulate_loss_grad({X + r * dim, static_cast<std::size_t>(dim)}, y[r], g,
                                             scale);
        }
        chunk_loss[c] = loss;
    }

    std::fill(grad.begin(), grad.end(), 0.0);
    double total = 0.0;
    for (int c = 0; c < n_chunks; ++c) {  // fixed order
        const double* g = chunk_buf.data() + static_cast<std::size_t>(c) * P;
        for (std::size_t p = 0; p < P; ++p) grad[p] += g[p];
        total += chunk_loss[c];
    }
    return total;
}

// Straight-line reference: one pass over the batch, no chunking. Differs from
// batch_gradient by floating-point accumulation order only.
template <class Net>
double batch_gradient_serial(const Net& net, const double* X, const double* y,
                             std::span<const long long> rows, std::span<double> grad) {
    const std::size_t P = net.param_count();
    const int dim = net.input_dim();
    if (grad.size() != P) throw std::invalid_argument("batch_gradient_serial: grad size mismatch");
    if (rows.empty()) throw std::invalid_argument("batch_gradient_serial: empty batch");
    const double scale = 1.0 / static_cast<double>(rows.size());
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    for (long long r : rows)
        loss += net.accumulate_loss_grad({X + r * dim, static_cast<std::size_t>(dim)}, y[r], grad,
                                         scale);
    return loss;
}

// Minibatch fit of net to (X, y): X row-major n x input_dim, y length n.
// Shuffles with a per-epoch substream of cfg.seed, steps with SGD or Adam.
// Throws (naming the epoch) if the training loss stops being finite.
template <class Net>
TrainResult fit(Net& net, const double* X, const double* y, long long n, const TrainConfig& cfg,
                int threads = 0) {
    cfg.validate();
    if (n < 1) throw std::invalid_argument("fit: need at least one sample");

    const std::size_t P = net.param_count();
    std::vector<double> grad(P), chunk_buf;
    std::vector<double> m1, m2;  // Adam moments
    if (cfg.optimizer == Optimizer::Adam) {
        m1.assign(P, 0.0);
        m2.assign(P, 0.0);
    }
    long long step = 0;

    std::vector<long long> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    TrainResult result;
    result.epoch_loss.reserve(cfg.epochs);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates with a stream tied to (seed, epoch)
        Rng shuffle_rng(stream_seed(cfg.seed, 2, static_cast<std::uint64_t>(epoch)));
        for (long long i = n - 1; i > 0; --i) {
            const long long j = static_cast<long long>(
                shuffle_rng.next_below(static_cast<std::uint64_t>(i + 1)));
            std::swap(perm[i], perm[j]);
        }

        double epoch_sq = 0.0;
        for (long long lo = 0; lo < n; lo += cfg.batch_size) {
            const long long hi = std::min<long long>(n, lo + cfg.batch_size);
            const std::span<const long long> rows(perm.data() + lo,
                                                  static_cast<std::size_t>(hi - lo));
            epoch_sq += batch_gradient(net, X, y, rows, grad, chunk_buf, threads);

            auto params = net.params();
            ++step;
            if (cfg.optimizer == Optimizer::Sgd) {
                for (std::size_t p = 0; p < P; ++p) params[p] -= cfg.learning_rate * grad[p];
            } else {
                const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
                const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
                const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
                for (std::size_t p = 0; p < P; ++p) {
                    m1[p] = b1 * m1[p] + (1.0 - b1) * grad[p];
                    m2[p] = b2 * m2[p] + (1.0 - b2) * grad[p] * grad[p];
                    params[p] -=
                        cfg.learning_rate * (m1[p] / c1) / (std::sqrt(m2[p] / c2) + cfg.adam_eps);
                }
            }
        }
        const double mse = epoch_sq / static_cast<double>(n);
        if (!std::isfinite(mse))
            throw std::runtime_error("training diverged at epoch " + std::to_string(epoch) +
                                     ": loss is not finite");
        result.epoch_loss.push_back(mse);
    }
    return result;
}

}  // namespace flowfwd
