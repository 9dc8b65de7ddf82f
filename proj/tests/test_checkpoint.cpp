#include <algorithm>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>

#include "doctest.h"
#include "flowfwd/checkpoint.hpp"
#include "flowfwd/rng.hpp"
#include "json.hpp"

using namespace flowfwd;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "flowfwd_checkpoint_tests";
    fs::create_directories(dir);
    return dir / name;
}

bool same(std::span<const double> a, std::span<const double> b) {
    return std::ranges::equal(a, b);
}

Checkpoint hilbert_checkpoint() {
    Checkpoint ck;
    ck.kind = Checkpoint::Kind::Hilbert;
    ck.hilbert = HilbertNet::random_init(4, 7, 99);
    ck.train.batch_size = 512;
    ck.train.epochs = 3;
    ck.train.learning_rate = 2.5e-3;
    ck.train.seed = 4242;
    ck.basis_size = 7;
    return ck;
}

Checkpoint classical_checkpoint() {
    Checkpoint ck;
    ck.kind = Checkpoint::Kind::Classical;
    ck.classical = ClassicalNet::random_init(6, 5, Activation::Tanh, 77);
    ck.xi_max = 2.0;
    ck.train.optimizer = Optimizer::Sgd;
    ck.basis_size = 7;
    return ck;
}

}  // namespace

TEST_CASE("hilbert checkpoint round-trips bit-exactly") {
    const Checkpoint ck = hilbert_checkpoint();
    const auto p = tmp_file("h.json");
    save_checkpoint(ck, p.string());
    const Checkpoint back = load_checkpoint(p.string());

    REQUIRE(back.kind == Checkpoint::Kind::Hilbert);
    REQUIRE(back.hilbert.has_value());
    CHECK(back.hilbert->nodes() == 4);
    CHECK(back.hilbert->input_dim() == 7);
    CHECK(same(back.hilbert->params(), ck.hilbert->params()));
    CHECK(same(back.hilbert->psi(), ck.hilbert->psi()));
    CHECK(same(back.hilbert->z_dir(), ck.hilbert->z_dir()));
    CHECK(back.train.batch_size == 512);
    CHECK(back.train.epochs == 3);
    CHECK(back.train.learning_rate == 2.5e-3);
    CHECK(back.train.seed == 4242);
    CHECK(back.basis_size == 7);
    CHECK(back.basis_variant == OrthonormalBasis::Variant::Standard);

    // same inputs, same outputs after the round trip
    Rng rng(5);
    std::vector<double> x(7);
    for (auto& v : x) v = rng.uniform(-0.5, 0.5);
    CHECK(back.hilbert->forward(x) == ck.hilbert->forward(x));
}

TEST_CASE("classical checkpoint round-trips bit-exactly") {
    const Checkpoint ck = classical_checkpoint();
    const auto p = tmp_file("c.json");
    save_checkpoint(ck, p.string());
    const Checkpoint back = load_checkpoint(p.string());

    REQUIRE(back.kind == Checkpoint::Kind::Classical);
    REQUIRE(back.classical.has_value());
    CHECK(back.classical->hidden() == 6);
    CHECK(back.classical->input_dim() == 5);
    CHECK(back.classical->activation() == Activation::Tanh);
    CHECK(same(back.classical->params(), ck.classical->params()));
    CHECK(back.xi_max == 2.0);
    CHECK(back.train.optimizer == Optimizer::Sgd);
}

TEST_CASE("saving twice writes identical files") {
    const Checkpoint ck = hilbert_checkpoint();
    const auto p1 = tmp_file("dup1.json");
    const auto p2 = tmp_file("dup2.json");
    save_checkpoint(ck, p1.string());
    save_checkpoint(ck, p2.string());
    std::ifstream a(p1), b(p2);
    const std::string sa{std::istreambuf_iterator<char>(a), std::istreambuf_iterator<char>()};
    const std::string sb{std::istreambuf_iterator<char>(b), std::istreambuf_iterator<char>()};
    CHECK(sa == sb);
    CHECK(!sa.empty());
}

TEST_CASE("loader reports the path on malformed input") {
    const auto p = tmp_file("broken.json");
    std::ofstream(p) << "{ not json";
    CHECK_THROWS_WITH_AS(load_checkpoint(p.string()), doctest::Contains("broken.json"),
                         std::runtime_error);
    CHECK_THROWS_AS(load_checkpoint(tmp_file("absent.json").string()), std::runtime_error);
}

TEST_CASE("loader rejects structurally wrong checkpoints") {
    using nlohmann::json;
    const auto p = tmp_file("wrong.json");

    // round-trip a good one, then break individual fields
    save_checkpoint(hilbert_checkpoint(), p.string());
    json good;
    {
        std::ifstream in(p);
        in >> good;
    }

    json bad = good;
    bad["activation"] = "relu";  // coefficient-space model has a fixed activation
    std::ofstream(p) << bad.dump();
    CHECK_THROWS_AS(load_checkpoint(p.string()), std::runtime_error);

    bad = good;
    bad["b"] = json::array({1.0});  // wrong length
    std::ofstream(p) << bad.dump();
    CHECK_THROWS_AS(load_checkpoint(p.string()), std::runtime_error);

    bad = good;
    bad.erase("A");
    std::ofstream(p) << bad.dump();
    CHECK_THROWS_AS(load_checkpoint(p.string()), std::runtime_error);

    bad = good;
    bad["kind"] = "polynomial";
    std::ofstream(p) << bad.dump();
    CHECK_THROWS_AS(load_checkpoint(p.string()), std::runtime_error);
}

TEST_CASE("alt basis tag survives the round trip") {
    Checkpoint ck = hilbert_checkpoint();
    ck.basis_variant = OrthonormalBasis::Variant::Alt;
    const auto p = tmp_file("alt.json");
    save_checkpoint(ck, p.string());
    CHECK(load_checkpoint(p.string()).basis_variant == OrthonormalBasis::Variant::Alt);
}

TEST_CASE("checkpoint validation requires a matching network") {
    Checkpoint ck;
    ck.kind = Checkpoint::Kind::Hilbert;  // no network attached
    CHECK_THROWS_AS(ck.validate(), std::invalid_argument);
    ck.hilbert = HilbertNet::random_init(2, 3, 1);
    ck.basis_size = 3;
    CHECK_NOTHROW(ck.validate());
    ck.basis_size = 9;  // basis cap is seven
    CHECK_THROWS_AS(ck.validate(), std::invalid_argument);
}
