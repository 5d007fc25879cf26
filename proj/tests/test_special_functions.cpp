#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "mie/special_functions.hpp"

using namespace mie::sf;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent oracle: adaptive Simpson of the defining integral
// K(k) = int_0^{pi/2} dtheta / sqrt(1 - k^2 sin^2 theta).
double simpson(double (*f)(double, double), double k, double a, double b, double fa,
               double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double flm = f(k, 0.5 * (a + m));
    const double frm = f(k, 0.5 * (m + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, k, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           simpson(f, k, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double k_integrand(double k, double theta) {
    const double s = std::sin(theta);
    return 1.0 / std::sqrt(1.0 - k * k * s * s);
}

double elliptic_k_quadrature(double k) {
    return simpson(k_integrand, k, 0.0, 0.5 * kPi, k_integrand(k, 0.0),
                   k_integrand(k, 0.25 * kPi), k_integrand(k, 0.5 * kPi), 1e-13, 48);
}

// Independent oracle: brute-force winding sum with a fixed wide window.
double winding_brute(double q, double g, double a, int window = 20) {
    double total = 0.0;
    for (int w = -window; w <= window; ++w)
        total += std::pow(q, g * (w + a) * (w + a));
    return total;
}

// Independent oracle: explicit eta product with a fixed huge term count.
double eta_brute(double q, int terms) {
    double p = std::pow(q, 1.0 / 24.0);
    for (int s = 1; s <= terms; ++s) p *= (1.0 - std::pow(q, s));
    return p;
}

} // namespace

TEST_CASE("elliptic_k special values") {
    CHECK(elliptic_k(0.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
    // Gamma(1/4)^2 / (4 sqrt(pi))
    CHECK(elliptic_k(1.0 / std::sqrt(2.0)) ==
          doctest::Approx(1.854074677301372).epsilon(2e-15));
    const double near_one = elliptic_k(0.999999);
    CHECK(std::isfinite(near_one));
    CHECK(near_one > 7.0);
}

TEST_CASE("elliptic_k against adaptive quadrature on a 50-point grid") {
    for (int i = 0; i < 50; ++i) {
        const double k = 0.98 * i / 49.0;
        CHECK(elliptic_k(k) == doctest::Approx(elliptic_k_quadrature(k)).epsilon(1e-10));
    }
}

TEST_CASE("elliptic_k domain and monotonicity") {
    CHECK_THROWS_AS(elliptic_k(-0.1), std::domain_error);
    CHECK_THROWS_AS(elliptic_k(1.0), std::domain_error);
    CHECK_THROWS_AS(elliptic_k(1.5), std::domain_error);
    double prev = 0.0;
    for (double k = 0.0; k < 1.0; k += 0.05) {
        const double val = elliptic_k(k);
        CHECK(val > prev);
        prev = val;
    }
}

TEST_CASE("dedekind_eta values") {
    CHECK(dedekind_eta(Nome(0.0)) == 0.0);
    // eta at q = e^{-2 pi} (tau = i): Gamma(1/4) / (2 pi^{3/4})
    CHECK(dedekind_eta(Nome(std::exp(-2.0 * kPi))) ==
          doctest::Approx(0.7682254223260566).epsilon(1e-12));
    const double slow = dedekind_eta(Nome(0.9)); // needs ~400 product terms
    CHECK(slow > 0.0);
    CHECK(slow < 1e-3);
    CHECK(slow == doctest::Approx(eta_brute(0.9, 500)).epsilon(1e-13));
}

TEST_CASE("dedekind_eta modular-transform branch agrees with the raw product") {
    for (double q : {0.991, 0.995}) {
        const double direct = eta_brute(q, 12000);
        CHECK(dedekind_eta(Nome(q)) == doctest::Approx(direct).epsilon(1e-11));
    }
    CHECK_THROWS_AS(dedekind_eta(Nome(1.0)), std::domain_error);
    CHECK_THROWS_AS(dedekind_eta(Nome(-0.1)), std::domain_error);
}

TEST_CASE("log eta matches the term-by-term log sum") {
    for (double q : {1e-6, 0.01, 0.3, 0.6, 0.9, 0.97}) {
        double expected = std::log(q) / 24.0;
        for (int s = 1; std::pow(q, s) > 1e-18; ++s) expected += std::log1p(-std::pow(q, s));
        CHECK(log_dedekind_eta(Nome(q)) == doctest::Approx(expected).epsilon(1e-13));
        CHECK(std::exp(log_dedekind_eta(Nome(q))) ==
              doctest::Approx(dedekind_eta(Nome(q))).epsilon(1e-12));
    }
}

TEST_CASE("winding_sum at q = 0") {
    CHECK(winding_sum(Nome(0.0), 1.0, 0.3) == 0.0);  // all exponents positive
    CHECK(winding_sum(Nome(0.0), 1.0, 0.0) == 1.0);  // w = 0 survives
    CHECK(winding_sum(Nome(0.0), 0.7, -2.0) == 1.0); // w = 2 survives
}

TEST_CASE("winding_sum against brute force") {
    CHECK(winding_sum(Nome(0.5), 1.0, 0.0) ==
          doctest::Approx(winding_brute(0.5, 1.0, 0.0)).epsilon(1e-14));
    CHECK(winding_sum(Nome(0.5), 1.0, 0.0) ==
          doctest::Approx(2.128936827211877).epsilon(1e-14));
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uq(1e-4, 0.8), ug(0.2, 3.0), ua(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double q = uq(rng), g = ug(rng), a = ua(rng);
        CHECK(winding_sum(Nome(q), g, a) ==
              doctest::Approx(winding_brute(q, g, a)).epsilon(1e-12));
    }
}

TEST_CASE("winding_sum reflection and shift symmetry") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> uq(1e-6, 0.95), ug(0.2, 3.0), ua(-3.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        const double q = uq(rng), g = ug(rng), a = ua(rng);
        const double t = winding_sum(Nome(q), g, a);
        CHECK(winding_sum(Nome(q), g, -a) == doctest::Approx(t).epsilon(1e-13));
        CHECK(winding_sum(Nome(q), g, a + 1.0) == doctest::Approx(t).epsilon(1e-13));
    }
}

TEST_CASE("direct and Poisson branches agree across the crossover") {
    for (double scale : {0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0}) {
        const double q = detail::q_switch * scale;
        const double lq = std::log(q);
        for (double g : {0.4, 0.5, 1.0, 2.0}) {
            for (double a : {0.0, 0.17, 0.5, 0.93}) {
                const double direct = detail::winding_sum_direct(lq, g, a);
                const double dual = detail::winding_sum_poisson(lq, g, a);
                CHECK(direct == doctest::Approx(dual).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("winding_sum domain") {
    CHECK_THROWS_AS(winding_sum(Nome(1.0), 1.0, 0.0), std::domain_error); // divergent
    CHECK_THROWS_AS(winding_sum(Nome(0.5), -1.0, 0.0), std::domain_error);
}

TEST_CASE("log_winding_sum is consistent and survives underflow") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uq(1e-6, 0.9), ug(0.3, 2.0), ua(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double q = uq(rng), g = ug(rng), a = ua(rng);
        CHECK(std::exp(log_winding_sum(Nome(q), g, a)) ==
              doctest::Approx(winding_sum(Nome(q), g, a)).epsilon(1e-12));
    }
    // log q = -5000: every term underflows, the log version must not
    const double lt = log_winding_sum_from_log_q(-5000.0, 1.0, 0.4);
    CHECK(lt == doctest::Approx(-5000.0 * 0.4 * 0.4).epsilon(1e-12));
}
