// Times the OpenMP kernels against their serial reference implementations:
// Monte Carlo pricing, minibatch gradients, and dataset generation.
//
//   flowfwd_bench [max_threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "flowfwd/harness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace flowfwd;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

std::vector<int> thread_counts(int max_threads) {
    std::vector<int> out;
    for (int t = 1; t <= max_threads; t *= 2) out.push_back(t);
    if (out.back() != max_threads) out.push_back(max_threads);
    return out;
}

void bench_mc(const OrthonormalBasis& basis, int max_threads) {
    const std::vector<double> x = {0.1, -0.2, 0.15, 0.05, -0.1, 0.3, -0.25};
    const NoiseSpec noise = NoiseSpec::multi_dim();
    const ContractSpec contract;
    const long long sims = 200000;

    std::printf("monte carlo price, %lld paths, %d factors, %d time steps\n", sims, noise.dim,
                noise.time_steps);
    auto t0 = clk::now();
    const PriceEstimate ref = mc_price_serial(basis, x, noise, contract, sims, 7);
    const double serial = seconds_since(t0);
    std::printf("  serial reference   %7.3fs   price %.6f\n", serial, ref.price);

    for (int t : thread_counts(max_threads)) {
        t0 = clk::now();
        const PriceEstimate est = mc_price(basis, x, noise, contract, sims, 7, t);
        const double dt = seconds_since(t0);
        std::printf("  chunked, %2d thread%s %7.3fs   price %.6f   speedup %4.2fx\n", t,
                    t > 1 ? "s" : " ", dt, est.price, serial / dt);
    }
}

void bench_gradient(int max_threads) {
    const int dim = 7, nodes = 15;
    const long long rows = 20000;
    std::vector<double> X(rows * dim), y(rows);
    Rng rng(11);
    for (auto& v : X) v = rng.uniform(-0.5, 0.5);
    for (auto& v : y) v = rng.uniform(0.0, 0.3);

    HilbertNet net = HilbertNet::random_init(nodes, dim, 5);
    std::vector<double> grad(net.param_count());
    std::vector<double> chunk_buf;
    std::vector<long long> idx(rows);
    for (long long i = 0; i < rows; ++i) idx[i] = i;
    const int reps = 20;

    std::printf("\nminibatch gradient, %lld rows x %d reps, %zu parameters\n", rows, reps,
                net.param_count());
    auto t0 = clk::now();
    for (int r = 0; r < reps; ++r)
        batch_gradient_serial(net, X.data(), y.data(), idx, grad);
    const double serial = seconds_since(t0);
    std::printf("  serial reference   %7.3fs\n", serial);

    for (int t : thread_counts(max_threads)) {
        t0 = clk::now();
        for (int r = 0; r < reps; ++r)
            batch_gradient(net, X.data(), y.data(), idx, grad, chunk_buf, t);
        const double dt = seconds_since(t0);
        std::printf("  chunked, %2d thread%s %7.3fs   speedup %4.2fx\n", t, t > 1 ? "s" : " ",
                    dt, serial / dt);
    }
}

void bench_generation(int max_threads) {
    ExperimentConfig cfg;
    cfg.n_train = 50000;
    cfg.noise = NoiseSpec::multi_dim();
    cfg.format = DatasetFormat::Binary;

    std::printf("\ntraining data generation, %lld rows, %d factors\n", cfg.n_train,
                cfg.noise.dim);
    for (int t : thread_counts(max_threads)) {
        const std::string path = "/tmp/flowfwd_bench_gen.bin";
        const auto t0 = clk::now();
        generate_training_data(cfg, path, t);
        const double dt = seconds_since(t0);
        std::printf("  %2d thread%s %7.3fs   %.0f rows/s\n", t, t > 1 ? "s" : " ", dt,
                    cfg.n_train / dt);
        std::remove(path.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    int max_threads = omp_get_max_threads();
#else
    int max_threads = 1;
#endif
    if (argc > 1) max_threads = std::atoi(argv[1]);
    if (max_threads < 1) {
        std::fprintf(stderr, "usage: flowfwd_bench [max_threads]\n");
        return 1;
    }

    const OrthonormalBasis basis(7);
    bench_mc(basis, max_threads);
    bench_gradient(max_threads);
    bench_generation(max_threads);
    return 0;
}
