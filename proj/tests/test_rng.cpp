#include <cmath>
#include <vector>

#include "doctest.h"
#include "flowfwd/rng.hpp"

using namespace flowfwd;

TEST_CASE("same seed, same stream") {
    Rng a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("stream ids separate streams") {
    // adjacent (row, lane) ids must not produce correlated output
    CHECK(stream_seed(1, 0, 0) != stream_seed(1, 0, 1));
    CHECK(stream_seed(1, 0, 0) != stream_seed(1, 1, 0));
    CHECK(stream_seed(1, 0, 0) != stream_seed(2, 0, 0));

    Rng a(stream_seed(7, 0, 0)), b(stream_seed(7, 1, 0));
    double cov = 0.0, ma = 0.0, mb = 0.0;
    const int n = 20000;
    std::vector<double> xa(n), xb(n);
    for (int i = 0; i < n; ++i) {
        xa[i] = a.normal();
        xb[i] = b.normal();
        ma += xa[i];
        mb += xb[i];
    }
    ma /= n;
    mb /= n;
    for (int i = 0; i < n; ++i) cov += (xa[i] - ma) * (xb[i] - mb);
    cov /= n - 1;
    CHECK(std::abs(cov) < 4.0 / std::sqrt(double(n)));  // ~4 sigma
}

TEST_CASE("uniform01 is in [0,1) and roughly uniform") {
    Rng r(99);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sumsq += u * u;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("normal moments") {
    Rng r(2024);
    const int n = 200000;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        m1 += z;
        m2 += z * z;
        m3 += z * z * z;
        m4 += z * z * z * z;
    }
    m1 /= n;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    CHECK(std::abs(m1) < 0.01);
    CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(m3) < 0.05);
    CHECK(m4 == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("next_below is unbiased over small ranges") {
    Rng r(5);
    const std::uint64_t k = 7;
    std::vector<int> counts(k, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) ++counts[r.next_below(k)];
    for (auto c : counts) CHECK(std::abs(c - n / double(k)) < 5.0 * std::sqrt(n / double(k)));
}

TEST_CASE("fill_normals matches repeated normal()") {
    Rng a(42), b(42);
    std::vector<double> buf(17);
    a.fill_normals(buf.data(), buf.size());
    for (double v : buf) CHECK(v == b.normal());
}
