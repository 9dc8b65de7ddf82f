#include "flowfwd/pricing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flowfwd {

namespace {

constexpr long long kChunk = 1024;  // fixed; part of the determinism contract

struct ChunkSums {
    double sum = 0.0;
    double sumsq = 0.0;
};

// payoffs of chunk c, accumulated into (sum, sumsq) in draw order
ChunkSums run_chunk(const PayoffSampler& sampler, std::span<const double> det, std::uint64_t seed,
                    long long chunk_index, long long count, bool antithetic,
                    std::span<double> zbuf, std::span<double> ybuf) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(chunk_index)));
    ChunkSums s;
    if (antithetic) {
        for (long long k = 0; k < count; k += 2) {
            rng.fill_normals(zbuf.data(), zbuf.size());
            double p = sampler.payoff(det, zbuf, ybuf);
            s.sum += p;
            s.sumsq += p * p;
            for (auto& z : zbuf) z = -z;
            p = sampler.payoff(det, zbuf, ybuf);
            s.sum += p;
            s.sumsq += p * p;
        }
    } else {
        for (long long k = 0; k < count; ++k) {
            const double p = sampler.sample(det, rng, zbuf, ybuf);
            s.sum += p;
            s.sumsq += p * p;
        }
    }
    return s;
}

PriceEstimate finalize(double sum, double sumsq, long long n) {
    const double mean = sum / n;
    double var = (sumsq - n * mean * mean) / (n - 1);
    if (var < 0.0) var = 0.0;  // cancellation guard for constant payoffs
    return {mean, std::sqrt(var / n), n};
}

void check_args(long long n_sims, bool antithetic) {
    if (n_sims < 2) throw std::invalid_argument("mc_price: need at least 2 simulations");
    if (antithetic && (n_sims % 2) != 0)
        throw std::invalid_argument("mc_price: antithetic pairing needs an even simulation count");
}

}  // namespace

PriceEstimate mc_price(const OrthonormalBasis& basis, std::span<const double> x,
                       const NoiseSpec& noise, const ContractSpec& contract, long long n_sims,
                       std::uint64_t seed, int threads, bool antithetic) {
    check_args(n_sims, antithetic);
    const PayoffSampler sampler(basis, noise, contract);
    const std::vector<double> det = sampler.deterministic_part(x);

    const long long n_chunks = (n_sims + kChunk - 1) / kChunk;
    std::vector<ChunkSums> partial(n_chunks);

#ifdef _OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
    {
        std::vector<double> zbuf(sampler.normal_count());
        std::vector<double> ybuf(det.size());
#pragma omp for schedule(dynamic, 1)
        for (long long c = 0; c < n_chunks; ++c) {
            const long long count = std::min(kChunk, n_sims - c * kChunk);
            partial[c] = run_chunk(sampler, det, seed, c, count, antithetic, zbuf, ybuf);
        }
    }
#else
    (void)threads;
    {
        std::vector<double> zbuf(sampler.normal_count());
        std::vector<double> ybuf(det.size());
        for (long long c = 0; c < n_chunks; ++c) {
            const long long count = std::min(kChunk, n_sims - c * kChunk);
            partial[c] = run_chunk(sampler, det, seed, c, count, antithetic, zbuf, ybuf);
        }
    }
#endif

    double sum = 0.0, sumsq = 0.0;
    for (const auto& p : partial) {  // fixed chunk order: thread-count independent
        sum += p.sum;
        sumsq += p.sumsq;
    }
    return finalize(sum, sumsq, n_sims);
}

PriceEstimate mc_price_serial(const OrthonormalBasis& basis, std::span<const double> x,
                              const NoiseSpec& noise, const ContractSpec& contract,
                              long long n_sims, std::uint64_t seed, bool antithetic) {
    check_args(n_sims, antithetic);
    const PayoffSampler sampler(basis, noise, contract);
    const std::vector<double> det = sampler.deterministic_part(x);
    std::vector<double> zbuf(sampler.normal_count());
    std::vector<double> ybuf(det.size());

    double sum = 0.0, sumsq = 0.0;
    const long long n_chunks = (n_sims + kChunk - 1) / kChunk;
    for (long long c = 0; c < n_chunks; ++c) {
        const long long count = std::min(kChunk, n_sims - c * kChunk);
        Rng rng(stream_seed(seed, static_cast<std::uint64_t>(c)));
        for (long long k = 0; k < count; ++k) {
            double p;
            if (antithetic) {
                if (k % 2 == 0) {
                    rng.fill_normals(zbuf.data(), zbuf.size());
                } else {
                    for (auto& z : zbuf) z = -z;
                }
                p = sampler.payoff(det, zbuf, ybuf);
            } else {
                p = sampler.sample(det, rng, zbuf, ybuf);
            }
            sum += p;
            sumsq += p * p;
        }
    }
    return finalize(sum, sumsq, n_sims);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double forward_level(const OrthonormalBasis& basis, std::span<const double> x,
                     const ContractSpec& contract) {
    const QuadRule r = delivery_rule(contract);
    double acc = 0.0;
    for (std::size_t g = 0; g < r.nodes.size(); ++g)
        acc += r.weights[g] * std::exp(basis.eval_curve(x, r.nodes[g] + contract.tau));
    return acc / contract.window();
}

double black76_price_one_dim(const OrthonormalBasis& basis, std::span<const double> x,
                             const ContractSpec& contract) {
    contract.validate();
    const double f0 = forward_level(basis, x, contract);
    const double st = std::sqrt(contract.tau);
    const double d1 = (std::log(f0 / contract.strike) + 0.5 * contract.tau) / st;
    const double d2 = d1 - st;
    return std::exp(-contract.rate * contract.tau) *
           (f0 * norm_cdf(d1) - contract.strike * norm_cdf(d2));
}

double black76_level_delta_one_dim(const OrthonormalBasis& basis, std::span<const double> x,
                                   const ContractSpec& contract) {
    contract.validate();
    const double f0 = forward_level(basis, x, contract);
    const double st = std::sqrt(contract.tau);
    const double d1 = (std::log(f0 / contract.strike) + 0.5 * contract.tau) / st;
    return std::exp(-contract.rate * contract.tau) * f0 * norm_cdf(d1);
}

}  // namespace flowfwd
