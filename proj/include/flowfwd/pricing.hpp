#pragma once

#include <cstdint>
#include <span>

#include "flowfwd/forward_model.hpp"

namespace flowfwd {

struct PriceEstimate {
    double price = 0.0;
    double std_error = 0.0;
    long long n_sims = 0;
};

double norm_cdf(double x);

// Monte Carlo price of the discounted call. Deterministic in (inputs, seed):
// simulations are laid out in fixed chunks of 1024, chunk c drawing from the
// substream (seed, c), and partial sums are combined in chunk order -- the
// result is bitwise identical for any thread count. threads <= 0 uses the
// OpenMP default. antithetic pairs draws within a chunk (n_sims must then be
// even).
PriceEstimate mc_price(const OrthonormalBasis& basis, std::span<const double> x,
                       const NoiseSpec& noise, const ContractSpec& contract, long long n_sims,
                       std::uint64_t seed, int threads = 0, bool antithetic = false);

// Straight-line single-thread reference with the same stream layout.
// Accumulates globally instead of per chunk, so it may differ from mc_price
// by floating-point association only (~1e-15 relative).
PriceEstimate mc_price_serial(const OrthonormalBasis& basis, std::span<const double> x,
                              const NoiseSpec& noise, const ContractSpec& contract,
                              long long n_sims, std::uint64_t seed, bool antithetic = false);

// Closed-form price under one-dim noise: the flow forward is lognormal with
// volatility 1, so the discounted call is the standard futures-option
// formula with F0 the time-0 delivery average of exp(x).
double black76_price_one_dim(const OrthonormalBasis& basis, std::span<const double> x,
                             const ContractSpec& contract);

// dV/dx_1 in closed form: moving the level coefficient scales F0 by e^dx.
double black76_level_delta_one_dim(const OrthonormalBasis& basis, std::span<const double> x,
                                   const ContractSpec& contract);

// F0 itself (delivery average of the time-0 forward curve exp(x)).
double forward_level(const OrthonormalBasis& basis, std::span<const double> x,
                     const ContractSpec& contract);

}  // namespace flowfwd
