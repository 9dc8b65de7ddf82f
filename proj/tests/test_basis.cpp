#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "flowfwd/basis.hpp"

using namespace flowfwd;

TEST_CASE("closed forms are orthonormal under the weighted inner product") {
    const OrthonormalBasis basis(7);
    for (int i = 1; i <= 7; ++i)
        for (int j = i; j <= 7; ++j) {
            const double ip = inner_product_w(basis.element(i), basis.element(j));
            const double want = (i == j) ? 1.0 : 0.0;
            INFO("pair (", i, ",", j, ")");
            CHECK(std::abs(ip - want) < 1e-9);
        }
}

TEST_CASE("numeric Gram-Schmidt over the generators reproduces the closed forms") {
    const auto gens = generator_family(7);
    const auto rows = gram_schmidt_w(gens);
    REQUIRE(rows.size() == 7);

    const OrthonormalBasis basis(7);
    for (int i = 1; i <= 7; ++i) {
        const RealFn gs = combine(rows[i - 1], gens);
        for (double xi = 0.0; xi <= 5.0 + 1e-12; xi += 0.25) {
            INFO("element ", i, " at xi=", xi);
            CHECK(std::abs(gs.value(xi) - basis.eval(i, xi)) < 1e-5);
        }
    }

    // and the output is itself orthonormal
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) {
            const double ip = inner_product_w(combine(rows[i], gens), combine(rows[j], gens));
            CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
}

TEST_CASE("gram_schmidt_w rejects dependent inputs with the offending index") {
    auto gens = generator_family(3);
    gens.push_back(gens[1]);  // duplicate
    try {
        gram_schmidt_w(gens);
        FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
}

TEST_CASE("frozen point values") {
    const OrthonormalBasis basis(7);
    CHECK(basis.eval(1, 3.7) == 1.0);
    CHECK(basis.eval(2, 1.0) == doctest::Approx(std::exp(-1.0) - 1.0).epsilon(1e-15));
    // q_3(1) e^-1 = e^-1
    CHECK(basis.eval(3, 1.0) == doctest::Approx(0.36787944117144232).epsilon(1e-15));
    // q_5(1) e^-1 = (1/6) e^-1
    CHECK(basis.eval(5, 1.0) == doctest::Approx(0.061313240195240387).epsilon(1e-14));
    // every element but the constant vanishes at 0, so curves start at x_1
    for (int i = 2; i <= 7; ++i) CHECK(std::abs(basis.eval(i, 0.0)) < 1e-15);
}

TEST_CASE("alt variant: published alternates, unit norm but not orthogonal") {
    const OrthonormalBasis alt(7, OrthonormalBasis::Variant::Alt);
    CHECK(alt.eval(5, 1.0) == doctest::Approx(-0.16060352836830084).epsilon(1e-14));
    // indices 1..4 agree with the standard family
    const OrthonormalBasis std_basis(7);
    for (int i = 1; i <= 4; ++i)
        for (double xi : {0.0, 0.5, 2.0}) CHECK(alt.eval(i, xi) == std_basis.eval(i, xi));

    double max_offdiag = 0.0;
    for (int i = 5; i <= 7; ++i) {
        CHECK(inner_product_w(alt.element(i), alt.element(i)) == doctest::Approx(1.0).epsilon(1e-9));
        for (int j = 1; j < i; ++j)
            max_offdiag =
                std::max(max_offdiag, std::abs(inner_product_w(alt.element(i), alt.element(j))));
    }
    CHECK(max_offdiag > 0.1);  // genuinely not orthogonal
}

TEST_CASE("derivatives match finite differences") {
    const OrthonormalBasis basis(7);
    const double h = 1e-6;
    for (int i = 1; i <= 7; ++i)
        for (double xi : {0.1, 0.7, 1.9, 4.2}) {
            const double fd = (basis.eval(i, xi + h) - basis.eval(i, xi - h)) / (2 * h);
            CHECK(basis.deriv(i, xi) == doctest::Approx(fd).epsilon(1e-7));
        }
}

TEST_CASE("curve evaluation") {
    const OrthonormalBasis basis(7);
    const std::array<double, 7> x{0.3, -0.2, 0.1, 0.0, 0.0, 0.0, 0.0};
    CHECK(basis.eval_curve(x, 0.5) == doctest::Approx(0.40902040104310499).epsilon(1e-15));
    CHECK(basis.eval_curve(x, 0.0) == doctest::Approx(0.3).epsilon(1e-15));

    // eval_all agrees with eval
    std::array<double, 7> vals{};
    basis.eval_all(1.3, vals);
    for (int i = 1; i <= 7; ++i) CHECK(vals[i - 1] == basis.eval(i, 1.3));

    // curve_deriv agrees with the coefficient-weighted element derivatives
    double want = 0.0;
    for (int i = 1; i <= 7; ++i) want += x[i - 1] * basis.deriv(i, 0.8);
    CHECK(basis.curve_deriv(x, 0.8) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("point-evaluation representer") {
    CHECK(riesz_representer(1.0, 2.0) == doctest::Approx(1.6321205588285577).epsilon(1e-15));
    CHECK(riesz_representer(2.0, 1.0) == riesz_representer(1.0, 2.0));  // symmetric

    const OrthonormalBasis basis(7);
    for (double xi : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const RealFn h = riesz_fn(xi);
        const std::array<double, 1> split{xi};
        // reproducing property against every element
        for (int i = 1; i <= 7; ++i) {
            INFO("xi=", xi, " element ", i);
            CHECK(std::abs(inner_product_w(h, basis.element(i), split) - basis.eval(i, xi)) < 1e-9);
        }
        // and against itself: |h_xi|^2 = h_xi(xi)
        CHECK(inner_product_w(h, h, split) ==
              doctest::Approx(riesz_representer(xi, xi)).epsilon(1e-12));
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS(OrthonormalBasis(0));
    CHECK_THROWS(OrthonormalBasis(8));
    const OrthonormalBasis basis(4);
    CHECK_THROWS(basis.eval(0, 1.0));
    CHECK_THROWS(basis.eval(5, 1.0));
    const std::array<double, 3> short_x{1.0, 2.0, 3.0};
    CHECK_THROWS(basis.eval_curve(short_x, 1.0));
}
