#include "flowfwd/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace flowfwd {

namespace {

using nlohmann::json;

json vec_to_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

std::vector<double> vec_from_json(const json& j, std::size_t want, const char* what) {
    if (!j.is_array() || j.size() != want)
        throw std::runtime_error(std::string("checkpoint: bad ") + what);
    std::vector<double> out;
    out.reserve(want);
    for (const auto& e : j) out.push_back(e.get<double>());
    return out;
}

json train_to_json(const TrainConfig& t) {
    return json{{"batch_size", t.batch_size},
                {"epochs", t.epochs},
                {"learning_rate", t.learning_rate},
                {"optimizer", std::string(optimizer_name(t.optimizer))},
                {"adam_beta1", t.adam_beta1},
                {"adam_beta2", t.adam_beta2},
                {"adam_eps", t.adam_eps}};
}

TrainConfig train_from_json(const json& j, std::uint64_t seed) {
    TrainConfig t;
    t.batch_size = j.at("batch_size").get<int>();
    t.epochs = j.at("epochs").get<int>();
    t.learning_rate = j.at("learning_rate").get<double>();
    t.optimizer = optimizer_from_name(j.at("optimizer").get<std::string>());
    t.adam_beta1 = j.at("adam_beta1").get<double>();
    t.adam_beta2 = j.at("adam_beta2").get<double>();
    t.adam_eps = j.at("adam_eps").get<double>();
    t.seed = seed;
    return t;
}

std::string variant_name(OrthonormalBasis::Variant v) {
    return v == OrthonormalBasis::Variant::Standard ? "standard" : "alt";
}

OrthonormalBasis::Variant variant_from_name(const std::string& s) {
    if (s == "standard") return OrthonormalBasis::Variant::Standard;
    if (s == "alt") return OrthonormalBasis::Variant::Alt;
    throw std::runtime_error("checkpoint: unknown basis variant '" + s + "'");
}

}  // namespace

void Checkpoint::validate() const {
    if (kind == Kind::Hilbert) {
        if (!hilbert) throw std::invalid_argument("Checkpoint: missing coefficient-space net");
    } else {
        if (!classical) throw std::invalid_argument("Checkpoint: missing grid-feature net");
        if (!(xi_max > 0.0)) throw std::invalid_argument("Checkpoint: xi_max must be positive");
    }
    if (basis_size < 1 || basis_size > 7)
        throw std::invalid_argument("Checkpoint: basis size out of range");
}

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
    ck.validate();
    json j;
    j["seed"] = ck.train.seed;
    j["train_config"] = train_to_json(ck.train);
    j["basis"] = json{{"size", ck.basis_size}, {"variant", variant_name(ck.basis_variant)}};

    if (ck.kind == Checkpoint::Kind::Hilbert) {
        const HilbertNet& net = *ck.hilbert;
        const int M = net.nodes(), N = net.input_dim();
        j["kind"] = "hilbert";
        j["M"] = M;
        j["N"] = N;
        j["activation"] = "beta-exp";
        j["psi"] = vec_to_json(net.psi());
        j["z"] = vec_to_json(net.z_dir());
        json A = json::array(), b = json::array(), ell = json::array();
        for (int jj = 0; jj < M; ++jj) {
            const auto Amat = net.weight_mat(jj);
            json rows = json::array();
            for (int p = 0; p < N; ++p)
                rows.push_back(vec_to_json(Amat.subspan(static_cast<std::size_t>(p) * N, N)));
            A.push_back(std::move(rows));
            b.push_back(vec_to_json(net.bias_vec(jj)));
            ell.push_back(vec_to_json(net.readout_vec(jj)));
        }
        j["A"] = std::move(A);
        j["b"] = std::move(b);
        j["ell"] = std::move(ell);
    } else {
        const ClassicalNet& net = *ck.classical;
        const int m = net.hidden(), D = net.input_dim();
        j["kind"] = "classical";
        j["m"] = m;
        j["D"] = D;
        j["xi_max"] = ck.xi_max;
        j["activation"] = std::string(activation_name(net.activation()));
        const auto params = net.params();
        json W = json::array();
        for (int k = 0; k < m; ++k)
            W.push_back(vec_to_json(params.subspan(static_cast<std::size_t>(k) * D, D)));
        j["W"] = std::move(W);
        j["b"] = vec_to_json(params.subspan(static_cast<std::size_t>(m) * D, m));
        j["v"] = vec_to_json(params.subspan(static_cast<std::size_t>(m) * (D + 1), m));
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error(path + ": write failed");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": not valid JSON (" + e.what() + ")");
    }

    Checkpoint ck;
    try {
        const std::string kind = j.value("kind", "hilbert");
        ck.train = train_from_json(j.at("train_config"), j.at("seed").get<std::uint64_t>());
        if (j.contains("basis")) {
            ck.basis_size = j["basis"].at("size").get<int>();
            ck.basis_variant = variant_from_name(j["basis"].at("variant").get<std::string>());
        }

        if (kind == "hilbert") {
            ck.kind = Checkpoint::Kind::Hilbert;
            const int M = j.at("M").get<int>();
            const int N = j.at("N").get<int>();
            if (j.at("activation").get<std::string>() != "beta-exp")
                throw std::runtime_error("checkpoint: unexpected activation for kind 'hilbert'");
            HilbertNet net(M, N);
            net.set_psi(vec_from_json(j.at("psi"), N, "psi"));
            net.set_z(vec_from_json(j.at("z"), N, "z"));
            const auto& A = j.at("A");
            const auto& b = j.at("b");
            const auto& ell = j.at("ell");
            if (!A.is_array() || static_cast<int>(A.size()) != M)
                throw std::runtime_error("checkpoint: bad A");
            for (int jj = 0; jj < M; ++jj) {
                auto Amat = net.weight_mat(jj);
                if (!A[jj].is_array() || static_cast<int>(A[jj].size()) != N)
                    throw std::runtime_error("checkpoint: bad A row");
                for (int p = 0; p < N; ++p) {
                    const auto row = vec_from_json(A[jj][p], N, "A row");
                    std::copy(row.begin(), row.end(),
                              Amat.begin() + static_cast<std::size_t>(p) * N);
                }
                const auto bj = vec_from_json(b.at(jj), N, "b");
                std::copy(bj.begin(), bj.end(), net.bias_vec(jj).begin());
                const auto lj = vec_from_json(ell.at(jj), N, "ell");
                std::copy(lj.begin(), lj.end(), net.readout_vec(jj).begin());
            }
            ck.hilbert = std::move(net);
        } else if (kind == "classical") {
            ck.kind = Checkpoint::Kind::Classical;
            const int m = j.at("m").get<int>();
            const int D = j.at("D").get<int>();
            ck.xi_max = j.at("xi_max").get<double>();
            ClassicalNet net(m, D, activation_from_name(j.at("activation").get<std::string>()));
            auto params = net.params();
            const auto& W = j.at("W");
            if (!W.is_array() || static_cast<int>(W.size()) != m)
                throw std::runtime_error("checkpoint: bad W");
            for (int k = 0; k < m; ++k) {
                const auto row = vec_from_json(W[k], D, "W row");
                std::copy(row.begin(), row.end(), params.begin() + static_cast<std::size_t>(k) * D);
            }
            const auto bv = vec_from_json(j.at("b"), m, "b");
            std::copy(bv.begin(), bv.end(), params.begin() + static_cast<std::size_t>(m) * D);
            const auto vv = vec_from_json(j.at("v"), m, "v");
            std::copy(vv.begin(), vv.end(),
                      params.begin() + static_cast<std::size_t>(m) * (D + 1));
            ck.classical = std::move(net);
        } else {
            throw std::runtime_error("checkpoint: unknown kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": malformed checkpoint (" + e.what() + ")");
    }
    ck.validate();
    return ck;
}

}  // namespace flowfwd
