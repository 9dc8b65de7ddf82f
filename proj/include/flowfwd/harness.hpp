#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "flowfwd/checkpoint.hpp"
#include "flowfwd/config.hpp"
#include "flowfwd/pricing.hpp"

namespace flowfwd {

// flag > 0 wins, then the FLOWFWD_WORKERS environment variable, then the
// OpenMP default. Worker count never changes any numeric output.
int resolve_workers(int flag);

// One training row: coefficients drawn uniformly from the config box, label a
// single discounted payoff draw. Row r uses substreams (seed', r, 0) for the
// coefficients and (seed', r, 1) for the noise, so output bytes depend only
// on (config, seed) -- never on the worker count.
void generate_training_data(const ExperimentConfig& cfg, const std::string& out_path, int workers);

// Same sampling, but each label is a full Monte Carlo price with its standard
// error (cfg.mc_sims simulations), under a purpose-separated substream so
// test rows never reuse training draws.
void generate_test_data(const ExperimentConfig& cfg, const std::string& out_path, int workers);

struct TrainSummary {
    TrainResult history;
    double wall_seconds = 0.0;
    std::size_t param_count = 0;
};

// Fits the configured network to a dataset and writes the checkpoint plus a
// deterministic metrics JSON (metrics_path may be empty to skip).
TrainSummary train_model(const ExperimentConfig& cfg, const std::string& data_path,
                         const std::string& checkpoint_path, const std::string& metrics_path,
                         int workers);

struct EvalReport {
    double mse = 0.0;
    long long rows = 0;
};

// Mean squared error of a checkpoint against a labeled dataset.
EvalReport evaluate_checkpoint(const std::string& checkpoint_path, const std::string& data_path,
                               int workers);

// Model price / level sensitivity for one coefficient vector.
double checkpoint_price(const Checkpoint& ck, std::span<const double> coeffs);
double checkpoint_level_delta(const Checkpoint& ck, std::span<const double> coeffs);

// Sweeps coefficient `index` (1-based) over [lo, hi] holding the others at
// base_coeffs; writes value,net_price,mc_price,mc_std_error rows to out_csv.
void sweep_coefficient(const ExperimentConfig& cfg, const Checkpoint& ck, int index, double lo,
                       double hi, int steps, std::span<const double> base_coeffs,
                       const std::string& out_csv, int workers);

// Orthonormality + Gram-Schmidt cross-check; prints a report to out. Returns
// false if any check exceeds tolerance.
bool verify_basis(int size, OrthonormalBasis::Variant variant, std::string& report);

}  // namespace flowfwd
