#include "flowfwd/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace flowfwd {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void parse_fail(const std::string& origin, long long line, const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

IniFile IniFile::parse_string(const std::string& text, const std::string& origin) {
    IniFile ini;
    ini.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.resize(cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(origin, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) parse_fail(origin, line_no, "empty section name");
            ini.sections_[section];  // a section may legitimately be empty
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) parse_fail(origin, line_no, "expected key = value");
        if (section.empty()) parse_fail(origin, line_no, "key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) parse_fail(origin, line_no, "empty key");
        auto& sec = ini.sections_[section];
        if (sec.count(key))
            parse_fail(origin, line_no, "duplicate key '" + key + "' in [" + section + "]");
        sec[key] = value;
    }
    return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

bool IniFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string IniFile::get(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw std::runtime_error(origin_ + ": [" + section + "] " + key + ": bad number '" + v +
                                 "'");
    return x;
}

long long IniFile::get_int(const std::string& section, const std::string& key,
                           long long fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw std::runtime_error(origin_ + ": [" + section + "] " + key + ": bad integer '" + v +
                                 "'");
    return x;
}

std::uint64_t IniFile::get_uint64(const std::string& section, const std::string& key,
                                  std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || v.front() == '-')
        throw std::runtime_error(origin_ + ": [" + section + "] " + key + ": bad seed '" + v + "'");
    return x;
}

void ExperimentConfig::validate() const {
    contract.validate();
    if (basis_size < 1 || basis_size > 7)
        throw std::invalid_argument("config: basis size must be in [1, 7]");
    noise.validate(basis_size);
    if (!(coeff_lo < coeff_hi))
        throw std::invalid_argument("config: coefficient box is empty");
    if (n_train < 1) throw std::invalid_argument("config: n_train must be positive");
    if (n_test < 1) throw std::invalid_argument("config: n_test must be positive");
    if (mc_sims < 2) throw std::invalid_argument("config: mc_sims must be at least 2");
    if (network.kind != "hilbert" && network.kind != "classical")
        throw std::invalid_argument("config: network kind must be hilbert or classical");
    if (network.nodes < 1 || network.hidden < 1)
        throw std::invalid_argument("config: network size must be positive");
    if (network.grid_size < 2)
        throw std::invalid_argument("config: classical feature grid needs at least 2 points");
    if (!(network.xi_max > 0.0)) throw std::invalid_argument("config: xi_max must be positive");
    train.validate();
}

ExperimentConfig config_from_ini(const IniFile& ini) {
    static const std::map<std::string, std::set<std::string>> known = {
        {"contract", {"tau", "delivery_start", "delivery_end", "strike", "rate", "quad_points"}},
        {"noise", {"kind", "dim", "time_steps"}},
        {"basis", {"size", "variant"}},
        {"dataset", {"n_train", "n_test", "mc_sims", "coeff_min", "coeff_max", "seed", "format"}},
        {"network", {"kind", "nodes", "hidden", "grid_size", "xi_max", "activation"}},
        {"train",
         {"batch_size", "epochs", "learning_rate", "optimizer", "adam_beta1", "adam_beta2",
          "adam_eps", "seed"}},
    };
    for (const auto& [section, keys] : ini.sections()) {
        const auto it = known.find(section);
        if (it == known.end())
            throw std::runtime_error("config: unknown section [" + section + "]");
        for (const auto& [key, value] : keys)
            if (!it->second.count(key))
                throw std::runtime_error("config: unknown key '" + key + "' in [" + section + "]");
    }

    ExperimentConfig cfg;
    cfg.contract.tau = ini.get_double("contract", "tau", cfg.contract.tau);
    cfg.contract.maturity_lo = ini.get_double("contract", "delivery_start", cfg.contract.maturity_lo);
    cfg.contract.maturity_hi = ini.get_double("contract", "delivery_end", cfg.contract.maturity_hi);
    cfg.contract.strike = ini.get_double("contract", "strike", cfg.contract.strike);
    cfg.contract.rate = ini.get_double("contract", "rate", cfg.contract.rate);
    cfg.contract.quad_points =
        static_cast<int>(ini.get_int("contract", "quad_points", cfg.contract.quad_points));

    const std::string noise_kind = ini.get("noise", "kind", "one-dim");
    if (noise_kind == "one-dim") {
        cfg.noise = NoiseSpec::one_dim();
    } else if (noise_kind == "multi-dim") {
        cfg.noise = NoiseSpec::multi_dim(static_cast<int>(ini.get_int("noise", "dim", 7)),
                                         static_cast<int>(ini.get_int("noise", "time_steps", 100)));
    } else {
        throw std::runtime_error("config: noise kind must be one-dim or multi-dim");
    }

    cfg.basis_size = static_cast<int>(ini.get_int("basis", "size", cfg.basis_size));
    const std::string variant = ini.get("basis", "variant", "standard");
    if (variant == "standard") {
        cfg.basis_variant = OrthonormalBasis::Variant::Standard;
    } else if (variant == "alt") {
        cfg.basis_variant = OrthonormalBasis::Variant::Alt;
    } else {
        throw std::runtime_error("config: basis variant must be standard or alt");
    }

    cfg.n_train = ini.get_int("dataset", "n_train", cfg.n_train);
    cfg.n_test = ini.get_int("dataset", "n_test", cfg.n_test);
    cfg.mc_sims = ini.get_int("dataset", "mc_sims", cfg.mc_sims);
    cfg.coeff_lo = ini.get_double("dataset", "coeff_min", cfg.coeff_lo);
    cfg.coeff_hi = ini.get_double("dataset", "coeff_max", cfg.coeff_hi);
    cfg.base_seed = ini.get_uint64("dataset", "seed", cfg.base_seed);
    cfg.format = dataset_format_from_name(
        ini.get("dataset", "format", std::string(dataset_format_name(cfg.format))));

    cfg.network.kind = ini.get("network", "kind", cfg.network.kind);
    cfg.network.nodes = static_cast<int>(ini.get_int("network", "nodes", cfg.network.nodes));
    cfg.network.hidden = static_cast<int>(ini.get_int("network", "hidden", cfg.network.hidden));
    cfg.network.grid_size =
        static_cast<int>(ini.get_int("network", "grid_size", cfg.network.grid_size));
    cfg.network.xi_max = ini.get_double("network", "xi_max", cfg.network.xi_max);
    cfg.network.activation = activation_from_name(
        ini.get("network", "activation", std::string(activation_name(cfg.network.activation))));

    cfg.train.batch_size =
        static_cast<int>(ini.get_int("train", "batch_size", cfg.train.batch_size));
    cfg.train.epochs = static_cast<int>(ini.get_int("train", "epochs", cfg.train.epochs));
    cfg.train.learning_rate = ini.get_double("train", "learning_rate", cfg.train.learning_rate);
    cfg.train.optimizer = optimizer_from_name(
        ini.get("train", "optimizer", std::string(optimizer_name(cfg.train.optimizer))));
    cfg.train.adam_beta1 = ini.get_double("train", "adam_beta1", cfg.train.adam_beta1);
    cfg.train.adam_beta2 = ini.get_double("train", "adam_beta2", cfg.train.adam_beta2);
    cfg.train.adam_eps = ini.get_double("train", "adam_eps", cfg.train.adam_eps);
    cfg.train.seed = ini.get_uint64("train", "seed", cfg.train.seed);

    cfg.validate();
    return cfg;
}

}  // namespace flowfwd
