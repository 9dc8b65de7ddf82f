#include "flowfwd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flowfwd {

namespace {

// substream purposes hanging off the base seed
constexpr std::uint64_t kTrainPurpose = 1;
constexpr std::uint64_t kTestPurpose = 2;
constexpr std::uint64_t kSweepPurpose = 3;

void draw_coeffs(const ExperimentConfig& cfg, std::uint64_t purpose_base, long long row,
                 double* out) {
    Rng rng(stream_seed(purpose_base, static_cast<std::uint64_t>(row), 0));
    for (int k = 0; k < cfg.basis_size; ++k) out[k] = rng.uniform(cfg.coeff_lo, cfg.coeff_hi);
}

int effective_workers(int workers) {
#ifdef _OPENMP
    return workers > 0 ? workers : omp_get_max_threads();
#else
    (void)workers;
    return 1;
#endif
}

}  // namespace

int resolve_workers(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("FLOWFWD_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
        throw std::runtime_error("FLOWFWD_WORKERS must be a positive integer");
    }
    return 0;  // library default
}

void generate_training_data(const ExperimentConfig& cfg, const std::string& out_path,
                            int workers) {
    cfg.validate();
    const OrthonormalBasis basis(cfg.basis_size, cfg.basis_variant);
    const PayoffSampler sampler(basis, cfg.noise, cfg.contract);
    const std::uint64_t base = stream_seed(cfg.base_seed, kTrainPurpose);

    Dataset ds;
    ds.n_coeffs = cfg.basis_size;
    ds.has_stderr = false;
    ds.coeffs.resize(cfg.n_train * cfg.basis_size);
    ds.labels.resize(cfg.n_train);

    const int nt = effective_workers(workers);
#ifdef _OPENMP
#pragma omp parallel num_threads(nt)
#endif
    {
        std::vector<double> det(sampler.simulator().grid().size());
        std::vector<double> zbuf(sampler.normal_count());
        std::vector<double> ybuf(det.size());
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 256)
#endif
        for (long long r = 0; r < cfg.n_train; ++r) {
            double* x = ds.coeffs.data() + r * cfg.basis_size;
            draw_coeffs(cfg, base, r, x);
            sampler.simulator().deterministic_part({x, static_cast<std::size_t>(cfg.basis_size)},
                                                   det);
            Rng noise_rng(stream_seed(base, static_cast<std::uint64_t>(r), 1));
            ds.labels[r] = sampler.sample(det, noise_rng, zbuf, ybuf);
        }
    }
    (void)nt;
    save_dataset(ds, out_path, cfg.format);
}

void generate_test_data(const ExperimentConfig& cfg, const std::string& out_path, int workers) {
    cfg.validate();
    const OrthonormalBasis basis(cfg.basis_size, cfg.basis_variant);
    const std::uint64_t base = stream_seed(cfg.base_seed, kTestPurpose);

    Dataset ds;
    ds.n_coeffs = cfg.basis_size;
    ds.has_stderr = true;
    ds.coeffs.resize(cfg.n_test * cfg.basis_size);
    ds.labels.resize(cfg.n_test);
    ds.std_errors.resize(cfg.n_test);

    const int nt = effective_workers(workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#endif
    for (long long r = 0; r < cfg.n_test; ++r) {
        double* x = ds.coeffs.data() + r * cfg.basis_size;
        draw_coeffs(cfg, base, r, x);
        const PriceEstimate est =
            mc_price(basis, {x, static_cast<std::size_t>(cfg.basis_size)}, cfg.noise, cfg.contract,
                     cfg.mc_sims, stream_seed(base, static_cast<std::uint64_t>(r), 1), 1);
        ds.labels[r] = est.price;
        ds.std_errors[r] = est.std_error;
    }
    (void)nt;
    save_dataset(ds, out_path, cfg.format);
}

namespace {

// feature matrix for the configured network: the coefficients themselves, or
// curve values on the classical grid
std::vector<double> build_features(const ExperimentConfig& cfg, const Dataset& ds, int& dim) {
    if (cfg.network.kind == "hilbert") {
        dim = ds.n_coeffs;
        return ds.coeffs;
    }
    const OrthonormalBasis basis(ds.n_coeffs, cfg.basis_variant);
    dim = cfg.network.grid_size;
    std::vector<double> X(ds.rows() * dim);
    for (long long r = 0; r < ds.rows(); ++r) {
        const auto f = grid_features(basis, ds.row(r), dim, cfg.network.xi_max);
        std::copy(f.begin(), f.end(), X.begin() + r * dim);
    }
    return X;
}

void write_metrics(const std::string& path, const std::string& kind, std::size_t param_count,
                   long long rows, const TrainResult& history) {
    nlohmann::json j;
    j["kind"] = kind;
    j["param_count"] = param_count;
    j["rows"] = rows;
    j["epochs"] = history.epoch_loss.size();
    j["epoch_mse"] = history.epoch_loss;
    j["final_mse"] = history.epoch_loss.empty() ? 0.0 : history.epoch_loss.back();
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << j.dump(2) << "\n";
}

}  // namespace

TrainSummary train_model(const ExperimentConfig& cfg, const std::string& data_path,
                         const std::string& checkpoint_path, const std::string& metrics_path,
                         int workers) {
    cfg.validate();
    const Dataset ds = load_dataset(data_path);
    if (ds.rows() == 0) throw std::runtime_error(data_path + ": dataset is empty");
    if (cfg.network.kind == "hilbert" && ds.n_coeffs != cfg.basis_size)
        throw std::runtime_error("config basis size " + std::to_string(cfg.basis_size) +
                                 " does not match dataset coefficient count " +
                                 std::to_string(ds.n_coeffs));

    int dim = 0;
    const std::vector<double> X = build_features(cfg, ds, dim);
    const std::uint64_t init_seed = stream_seed(cfg.train.seed, 1);

    const auto t0 = std::chrono::steady_clock::now();
    TrainSummary summary;
    Checkpoint ck;
    ck.train = cfg.train;
    ck.basis_size = ds.n_coeffs;
    ck.basis_variant = cfg.basis_variant;

    if (cfg.network.kind == "hilbert") {
        HilbertNet net = HilbertNet::random_init(cfg.network.nodes, dim, init_seed);
        summary.history = fit(net, X.data(), ds.labels.data(), ds.rows(), cfg.train, workers);
        summary.param_count = net.param_count();
        ck.kind = Checkpoint::Kind::Hilbert;
        ck.hilbert = std::move(net);
    } else {
        ClassicalNet net = ClassicalNet::random_init(cfg.network.hidden, dim,
                                                     cfg.network.activation, init_seed);
        summary.history = fit(net, X.data(), ds.labels.data(), ds.rows(), cfg.train, workers);
        summary.param_count = net.param_count();
        ck.kind = Checkpoint::Kind::Classical;
        ck.classical = std::move(net);
        ck.xi_max = cfg.network.xi_max;
    }
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    save_checkpoint(ck, checkpoint_path);
    if (!metrics_path.empty())
        write_metrics(metrics_path, cfg.network.kind, summary.param_count, ds.rows(),
                      summary.history);
    return summary;
}

EvalReport evaluate_checkpoint(const std::string& checkpoint_path, const std::string& data_path,
                               int workers) {
    const Checkpoint ck = load_checkpoint(checkpoint_path);
    const Dataset ds = load_dataset(data_path);
    if (ds.rows() == 0) throw std::runtime_error(data_path + ": dataset is empty");

    const long long n = ds.rows();
    const int n_chunks = static_cast<int>(std::min<long long>(64, n));
    std::vector<double> chunk_sq(n_chunks, 0.0);

    const int nt = effective_workers(workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#endif
    for (int c = 0; c < n_chunks; ++c) {
        const long long lo = n * c / n_chunks;
        const long long hi = n * (c + 1) / n_chunks;
        double acc = 0.0;
        for (long long r = lo; r < hi; ++r) {
            const double err = checkpoint_price(ck, ds.row(r)) - ds.labels[r];
            acc += err * err;
        }
        chunk_sq[c] = acc;
    }
    (void)nt;

    double total = 0.0;
    for (double v : chunk_sq) total += v;  // fixed order
    return {total / static_cast<double>(n), n};
}

double checkpoint_price(const Checkpoint& ck, std::span<const double> coeffs) {
    if (static_cast<int>(coeffs.size()) != ck.basis_size)
        throw std::invalid_argument("expected " + std::to_string(ck.basis_size) +
                                    " coefficients, got " + std::to_string(coeffs.size()));
    if (ck.kind == Checkpoint::Kind::Hilbert) return ck.hilbert->forward(coeffs);
    const OrthonormalBasis basis(ck.basis_size, ck.basis_variant);
    const auto f = grid_features(basis, coeffs, ck.classical->input_dim(), ck.xi_max);
    return ck.classical->forward(f);
}

double checkpoint_level_delta(const Checkpoint& ck, std::span<const double> coeffs) {
    if (ck.kind != Checkpoint::Kind::Hilbert)
        throw std::invalid_argument(
            "level delta needs the coefficient-space model; this checkpoint holds a grid-feature "
            "model");
    if (static_cast<int>(coeffs.size()) != ck.basis_size)
        throw std::invalid_argument("expected " + std::to_string(ck.basis_size) +
                                    " coefficients, got " + std::to_string(coeffs.size()));
    return ck.hilbert->level_delta(coeffs);
}

void sweep_coefficient(const ExperimentConfig& cfg, const Checkpoint& ck, int index, double lo,
                       double hi, int steps, std::span<const double> base_coeffs,
                       const std::string& out_csv, int workers) {
    cfg.validate();
    if (index < 1 || index > ck.basis_size)
        throw std::invalid_argument("sweep index out of range");
    if (steps < 1) throw std::invalid_argument("sweep needs at least one step");
    if (static_cast<int>(base_coeffs.size()) != ck.basis_size)
        throw std::invalid_argument("sweep base coefficients have the wrong size");

    const OrthonormalBasis basis(ck.basis_size, ck.basis_variant);
    std::ofstream out(out_csv);
    if (!out) throw std::runtime_error(out_csv + ": cannot open for writing");
    out << "value,net_price,mc_price,mc_std_error\n";

    std::vector<double> x(base_coeffs.begin(), base_coeffs.end());
    char line[160];
    for (int i = 0; i < steps; ++i) {
        const double v = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
        x[index - 1] = v;
        const double net = checkpoint_price(ck, x);
        const PriceEstimate est =
            mc_price(basis, x, cfg.noise, cfg.contract, cfg.mc_sims,
                     stream_seed(cfg.base_seed, kSweepPurpose, static_cast<std::uint64_t>(i)),
                     workers);
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", v, net, est.price,
                      est.std_error);
        out << line;
    }
    if (!out) throw std::runtime_error(out_csv + ": write failed");
}

bool verify_basis(int size, OrthonormalBasis::Variant variant, std::string& report) {
    const OrthonormalBasis basis(size, variant);
    std::ostringstream os;
    bool ok = true;

    double worst_gram = 0.0;
    for (int i = 1; i <= size; ++i)
        for (int j = i; j <= size; ++j) {
            const double ip = inner_product_w(basis.element(i), basis.element(j));
            worst_gram = std::max(worst_gram, std::abs(ip - (i == j ? 1.0 : 0.0)));
        }
    os << "orthonormality: max |<e_i,e_j> - delta_ij| = " << worst_gram << " (tol 1e-6)\n";
    ok = ok && worst_gram < 1e-6;

    const auto gens = generator_family(size);
    const auto rows = gram_schmidt_w(gens);
    double worst_gs = 0.0;
    for (int i = 1; i <= size; ++i) {
        const RealFn fn = combine(rows[i - 1], gens);
        for (double xi = 0.0; xi <= 5.0 + 1e-12; xi += 0.25)
            worst_gs = std::max(worst_gs, std::abs(fn.value(xi) - basis.eval(i, xi)));
    }
    os << "vs numeric Gram-Schmidt on [0,5]: max |diff| = " << worst_gs << " (tol 1e-5)\n";
    ok = ok && worst_gs < 1e-5;

    double worst_riesz = 0.0;
    for (double xi : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const RealFn h = riesz_fn(xi);
        const double split[] = {xi};
        for (int i = 1; i <= size; ++i)
            worst_riesz = std::max(
                worst_riesz, std::abs(inner_product_w(h, basis.element(i), split) - basis.eval(i, xi)));
    }
    os << "point-evaluation identity: max |<h_xi,e_i> - e_i(xi)| = " << worst_riesz
       << " (tol 1e-5)\n";
    ok = ok && worst_riesz < 1e-5;

    os << (ok ? "basis checks passed\n" : "basis checks FAILED\n");
    report = os.str();
    return ok;
}

}  // namespace flowfwd
