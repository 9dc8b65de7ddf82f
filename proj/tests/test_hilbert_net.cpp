#include <cmath>
#include <vector>

#include "doctest.h"
#include "flowfwd/hilbert_net.hpp"
#include "flowfwd/rng.hpp"

using namespace flowfwd;

TEST_CASE("activation shape") {
    CHECK(beta_activation(0.0) == 0.0);
    CHECK(beta_activation(-2.0) == 0.0);
    CHECK(beta_activation(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(beta_activation(40.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(beta_activation_deriv(-0.5) == 0.0);
    CHECK(beta_activation_deriv(0.0) == 0.0);  // one-sided at the kink
    CHECK(beta_activation_deriv(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("parameter count and layout") {
    const HilbertNet net(15, 7);
    CHECK(net.param_count() == 945);  // 15 * (49 + 14)
    CHECK(net.nodes() == 15);
    CHECK(net.input_dim() == 7);
    CHECK(net.weight_mat(0).size() == 49);
    CHECK(net.bias_vec(3).size() == 7);
    CHECK(net.readout_vec(14).size() == 7);

    // defaults: psi uniform unit vector, z the level direction
    for (double p : net.psi()) CHECK(p == doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-15));
    CHECK(net.z_dir()[0] == 1.0);
    for (int i = 1; i < 7; ++i) CHECK(net.z_dir()[i] == 0.0);
}

TEST_CASE("forward matches the hand-computed single-node formula") {
    HilbertNet net(1, 2);
    auto A = net.weight_mat(0);
    A[0] = 1.0; A[1] = 2.0; A[2] = 3.0; A[3] = 4.0;
    auto b = net.bias_vec(0);
    b[0] = 0.5; b[1] = -0.25;
    auto ell = net.readout_vec(0);
    ell[0] = 2.0; ell[1] = 7.0;  // only ell[0] is read out through z

    const std::vector<double> x{0.3, -0.1};
    // A x + b = (0.3 - 0.2 + 0.5, 0.9 - 0.4 - 0.25) = (0.6, 0.25)
    const double pre = (0.6 + 0.25) / std::sqrt(2.0);
    CHECK(net.preactivation(0, x) == doctest::Approx(pre).epsilon(1e-15));
    CHECK(net.readout_weight(0) == 2.0);
    CHECK(net.forward(x) == doctest::Approx(2.0 * (1.0 - std::exp(-pre))).epsilon(1e-15));
}

TEST_CASE("random init is reproducible and within scale") {
    const auto a = HilbertNet::random_init(4, 7, 123);
    const auto b = HilbertNet::random_init(4, 7, 123);
    const auto c = HilbertNet::random_init(4, 7, 124);
    REQUIRE(a.param_count() == b.param_count());
    bool any_diff = false;
    for (std::size_t i = 0; i < a.param_count(); ++i) {
        CHECK(a.params()[i] == b.params()[i]);
        CHECK(std::abs(a.params()[i]) <= 1.0 / std::sqrt(7.0));
        any_diff = any_diff || (a.params()[i] != c.params()[i]);
    }
    CHECK(any_diff);
}

namespace {

// node owning parameter index p, given layout [all A][all b][all ell]
int owner_node(const HilbertNet& net, std::size_t p, char& kind) {
    const std::size_t n = net.input_dim();
    const std::size_t a_block = net.nodes() * n * n;
    const std::size_t b_block = a_block + net.nodes() * n;
    if (p < a_block) {
        kind = 'A';
        return static_cast<int>(p / (n * n));
    }
    if (p < b_block) {
        kind = 'b';
        return static_cast<int>((p - a_block) / n);
    }
    kind = 'l';
    return static_cast<int>((p - b_block) / n);
}

}  // namespace

TEST_CASE("loss gradients match central finite differences") {
    Rng rng(777);
    int checked = 0;
    for (int cfg = 0; cfg < 20; ++cfg) {
        const int m = 1 + static_cast<int>(rng.next_below(4));
        const int n = 2 + static_cast<int>(rng.next_below(6));
        HilbertNet net = HilbertNet::random_init(m, n, rng.next_u64());
        if (cfg % 3 == 1) {
            // exercise non-default fixed directions too
            std::vector<double> psi(n), z(n);
            for (auto& v : psi) v = rng.uniform(-1.0, 1.0);
            for (auto& v : z) v = rng.uniform(-1.0, 1.0);
            net.set_psi(psi);
            net.set_z(z);
        }
        std::vector<double> x(n);
        for (auto& v : x) v = rng.uniform(-0.5, 0.5);
        const double target = net.forward(x) - rng.uniform(0.2, 1.0);

        const NetGradient g = net_gradient(net, x, target);
        const double h = 1e-6;
        for (std::size_t p = 0; p < net.param_count(); ++p) {
            char kind = 0;
            const int j = owner_node(net, p, kind);
            // A and b move the preactivation; skip nodes parked at the kink
            if (kind != 'l' && std::abs(net.preactivation(j, x)) <= 1e-4) continue;

            const double saved = net.params()[p];
            net.params()[p] = saved + h;
            const double up = std::pow(net.forward(x) - target, 2);
            net.params()[p] = saved - h;
            const double dn = std::pow(net.forward(x) - target, 2);
            net.params()[p] = saved;
            const double fd = (up - dn) / (2 * h);
            const double got = g.wrt_params[p];
            const double err = std::abs(got - fd);
            INFO("cfg ", cfg, " param ", p, " kind ", kind, " fd=", fd, " got=", got);
            CHECK((err <= 1e-5 * std::max(std::abs(got), std::abs(fd)) || err <= 1e-9));
            ++checked;
        }

        // input gradient, where no node sits at the kink
        bool clean = true;
        for (int j = 0; j < m; ++j)
            if (std::abs(net.preactivation(j, x)) <= 1e-3) clean = false;
        if (clean) {
            for (int q = 0; q < n; ++q) {
                const double saved = x[q];
                x[q] = saved + h;
                const double up = net.forward(x);
                x[q] = saved - h;
                const double dn = net.forward(x);
                x[q] = saved;
                const double fd = (up - dn) / (2 * h);
                const double got = g.wrt_input[q];
                const double err = std::abs(got - fd);
                CHECK((err <= 1e-5 * std::max(std::abs(got), std::abs(fd)) || err <= 1e-9));
            }
            CHECK(net.level_delta(x) == g.wrt_input[0]);
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("nodes on the dead side contribute nothing") {
    HilbertNet net(1, 3);
    auto b = net.bias_vec(0);
    b[0] = b[1] = b[2] = -5.0;  // pre < 0 for small x
    auto ell = net.readout_vec(0);
    ell[0] = 1.0;
    const std::vector<double> x{0.1, 0.1, 0.1};
    CHECK(net.forward(x) == 0.0);
    const NetGradient g = net_gradient(net, x, 1.0);
    for (double v : g.wrt_params) CHECK(v == 0.0);
    for (double v : g.wrt_input) CHECK(v == 0.0);
}

TEST_CASE("validation") {
    CHECK_THROWS(HilbertNet(0, 7));
    CHECK_THROWS(HilbertNet(3, 0));
    HilbertNet net(2, 3);
    const std::vector<double> wrong{1.0, 2.0};
    CHECK_THROWS(net.forward(wrong));
    CHECK_THROWS(net.set_psi(wrong));
    const std::vector<double> x{0.0, 0.0, 0.0};
    std::vector<double> small_grad(3);
    CHECK_THROWS(net.accumulate_loss_grad(x, 0.0, small_grad, 1.0));
}
