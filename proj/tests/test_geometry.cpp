#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "mie/geometry.hpp"

using namespace mie::geom;

namespace {
constexpr double kPi = 3.14159265358979323846;

// brute-force chord-formula evaluation, independent of cross_ratio()
double zeta_brute(double L, double x1, double x2, double x3, double x4) {
    auto w = [&](double xi, double xj) { return L / kPi * std::sin(kPi * (xj - xi) / L); };
    return w(x1, x2) * w(x3, x4) / (w(x1, x3) * w(x2, x4));
}
} // namespace

TEST_CASE("cross_ratio of the fully symmetric quarter layout is 1/2") {
    const double L = 16.0;
    const RingGeometry quarter(L, 0.0, L / 4, L / 2, 3 * L / 4);
    CHECK(cross_ratio(quarter) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cross_ratio(quarter) ==
          doctest::Approx(zeta_brute(L, 0.0, L / 4, L / 2, 3 * L / 4)).epsilon(1e-15));
}

TEST_CASE("cross_ratio vanishes as A shrinks to a point") {
    const double L = 100.0;
    double prev = 1.0;
    for (double eps : {1.0, 0.1, 0.01, 1e-4, 1e-6}) {
        const double z = cross_ratio(RingGeometry(L, 0.0, eps, 40.0, 70.0));
        CHECK(z < prev);
        prev = z;
    }
    CHECK(prev < 1e-7);
}

TEST_CASE("cross_ratio invariances and range") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double L = 10.0 + 90.0 * u(rng);
        double xs[4];
        xs[0] = L * u(rng);
        xs[1] = xs[0] + (L / 4) * (0.05 + 0.95 * u(rng));
        xs[2] = xs[1] + (L / 4) * (0.05 + 0.95 * u(rng));
        xs[3] = xs[2] + (L / 4) * (0.05 + 0.95 * u(rng));
        const RingGeometry geom(L, xs[0], xs[1], xs[2], xs[3]);
        const double z = cross_ratio(geom);
        CHECK(z > 0.0);
        CHECK(z < 1.0);
        // rotation invariance
        const double shift = L * u(rng) * 0.2;
        CHECK(cross_ratio(RingGeometry(L, xs[0] + shift, xs[1] + shift, xs[2] + shift,
                                       xs[3] + shift)) == doctest::Approx(z).epsilon(1e-12));
        // rescaling invariance
        const double lam = 0.5 + 3.0 * u(rng);
        CHECK(cross_ratio(RingGeometry(lam * L, lam * xs[0], lam * xs[1], lam * xs[2],
                                       lam * xs[3])) == doctest::Approx(z).epsilon(1e-12));
    }
}

TEST_CASE("RingGeometry rejects violations of the cyclic order") {
    CHECK_THROWS(RingGeometry(10.0, 0.0, 0.0, 4.0, 7.0));
    CHECK_THROWS(RingGeometry(10.0, 0.0, 5.0, 4.0, 7.0));
    CHECK_THROWS(RingGeometry(10.0, 0.0, 2.0, 4.0, 11.0));
}

TEST_CASE("cylinder height at the self-dual point and asymptotics") {
    // zeta such that k = 1/sqrt(2) forces K(k) = K(k'), h = 2 pi
    const double zeta0 = 0.9705627484771406;
    CHECK(cylinder_height(zeta0) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    // small zeta: h -> pi^2 / log(4/k), k = zeta/(1+sqrt(1-zeta))^2 ~ zeta/4
    for (double zeta : {1e-6, 1e-8}) {
        const double k = modulus_from_zeta(zeta);
        CHECK(cylinder_height(zeta) ==
              doctest::Approx(kPi * kPi / std::log(4.0 / k)).epsilon(1e-9));
        CHECK(cylinder_height(zeta) ==
              doctest::Approx(kPi * kPi / std::log(16.0 / zeta)).epsilon(1e-5));
    }
    CHECK_THROWS_AS(cylinder_height(0.0), std::domain_error);
    CHECK_THROWS_AS(cylinder_height(1.0), std::domain_error);
}

TEST_CASE("cylinder height duality h(zeta) h(zeta*) = 4 pi^2") {
    // zeta* = 1 - s^2 must stay representably away from 1 (s^2 >> eps), which
    // limits the round-trip check to zeta >= ~0.1
    for (double zeta : {0.1, 0.3, 0.5, 0.7, 0.9, 0.97}) {
        const double k = modulus_from_zeta(zeta);
        const double kp = std::sqrt((1.0 - k) * (1.0 + k));
        // invert k(zeta*): zeta* = 1 - ((1-kp)/(1+kp))^2
        const double s = (1.0 - kp) / (1.0 + kp);
        const double zeta_dual = 1.0 - s * s;
        CHECK(cylinder_height(zeta) * cylinder_height(zeta_dual) ==
              doctest::Approx(4.0 * kPi * kPi).epsilon(1e-10));
    }
}

TEST_CASE("cylinder height is monotone") {
    double prev = 0.0;
    for (double zeta = 0.02; zeta < 1.0; zeta += 0.02) {
        const double h = cylinder_height(zeta);
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("nome") {
    CHECK(nome(2.0 * kPi * kPi, 1.0).q == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uh(0.2, 30.0), un(0.2, 4.0);
    for (int i = 0; i < 100; ++i) {
        const double h = uh(rng), n = un(rng);
        CHECK(nome(h, n).q == doctest::Approx(std::pow(nome(h, 1.0).q, n)).epsilon(1e-12));
    }
    CHECK(nome(1e9, 1.0).q == doctest::Approx(1.0).epsilon(1e-6)); // h -> inf
    CHECK(nome(1e9, 1.0).q < 1.0);
    CHECK_THROWS_AS(nome(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(nome(1.0, 0.0), std::domain_error);
}

TEST_CASE("antipodal layout: sites, zeta closed form, monotone sweep") {
    const auto quarter = antipodal_layout(16, 4);
    CHECK(quarter.block_len == 4);
    CHECK(quarter.zeta == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(quarter.region_a == std::vector<int>{0, 1, 2, 3});
    CHECK(quarter.region_b == std::vector<int>{8, 9, 10, 11});
    CHECK(quarter.measured == std::vector<int>{4, 5, 6, 7, 12, 13, 14, 15});

    // for the antipodal family the chord formula collapses to sin^2(pi a / L)
    for (int L : {16, 64, 128}) {
        double prev = 1.0;
        for (int c = 1; c <= L / 2 - 1; ++c) {
            const auto lay = antipodal_layout(L, c);
            const double a = static_cast<double>(lay.block_len);
            CHECK(lay.zeta ==
                  doctest::Approx(std::pow(std::sin(kPi * a / L), 2)).epsilon(1e-12));
            CHECK(lay.zeta < prev);
            prev = lay.zeta;
        }
    }

    // doubling (L, c) -> (2L, 2c) preserves zeta exactly
    for (int c : {3, 9, 21}) {
        CHECK(antipodal_layout(128, c).zeta ==
              doctest::Approx(antipodal_layout(256, 2 * c).zeta).epsilon(1e-15));
    }

    CHECK_THROWS(antipodal_layout(15, 3));
    CHECK_THROWS(antipodal_layout(16, 8));
    CHECK_THROWS(antipodal_layout(16, 0).geometry()); // no four-point geometry
    CHECK(antipodal_layout(16, 0).zeta == doctest::Approx(1.0).epsilon(1e-9));
}
