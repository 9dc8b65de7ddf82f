#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "flowfwd/classical_net.hpp"
#include "flowfwd/dataset.hpp"
#include "flowfwd/forward_model.hpp"
#include "flowfwd/train.hpp"

namespace flowfwd {

// Minimal INI reader: [section] headers, key = value lines, # or ;
// comments, blank lines ignored. Parse errors carry the line number.
class IniFile {
  public:
    static IniFile parse_file(const std::string& path);
    static IniFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long long get_int(const std::string& section, const std::string& key,
                      long long fallback) const;
    std::uint64_t get_uint64(const std::string& section, const std::string& key,
                             std::uint64_t fallback) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::string origin_;
};

struct NetworkConfig {
    std::string kind = "hilbert";  // or "classical"
    int nodes = 15;                // hilbert: node count M
    int hidden = 80;               // classical: hidden units m
    int grid_size = 10;            // classical: feature count D
    double xi_max = 1.0;           // classical: feature grid extent
    Activation activation = Activation::Tanh;  // classical only
};

// Everything one desk study needs: the contract, the driving noise, the
// basis, how much data to generate, which model to fit and how. Defaults
// are the small one-dim study.
struct ExperimentConfig {
    ContractSpec contract;                 // monthly contract by default
    NoiseSpec noise = NoiseSpec::one_dim();
    int basis_size = 7;
    OrthonormalBasis::Variant basis_variant = OrthonormalBasis::Variant::Standard;

    double coeff_lo = -0.5;  // sampling box for curve coefficients
    double coeff_hi = 0.5;

    long long n_train = 200000;
    long long n_test = 500;
    long long mc_sims = 50000;  // per test label
    std::uint64_t base_seed = 12345;
    DatasetFormat format = DatasetFormat::Csv;

    NetworkConfig network;
    TrainConfig train;

    ExperimentConfig() {
        // the small study trains 200k rows in 2k batches for 20 epochs
        train.batch_size = 2000;
        train.epochs = 20;
        train.seed = 67890;
    }

    void validate() const;
};

// Assembles a config from an INI file over the defaults. Unknown sections or
// keys are an error (they are always typos).
ExperimentConfig config_from_ini(const IniFile& ini);

inline ExperimentConfig default_config() { return ExperimentConfig{}; }

}  // namespace flowfwd
