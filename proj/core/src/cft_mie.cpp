#include "mie/cft_mie.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mie::cft {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights; // for the weight e^{-x^2}; sum = sqrt(pi)
};

// Golub-Welsch on the symmetric Jacobi matrix; eigenvector completeness
// makes the weights sum to sqrt(pi) at machine precision, which is what
// pins W_{n,0} = 1 exactly.
const GaussHermite& gauss_hermite(int count) {
    static std::map<int, GaussHermite> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(count);
    if (it != cache.end()) return it->second;

    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
    for (int i = 0; i + 1 < count; ++i) {
        const double b = std::sqrt(0.5 * (i + 1));
        jacobi(i, i + 1) = b;
        jacobi(i + 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    GaussHermite gh;
    gh.nodes.resize(count);
    gh.weights.resize(count);
    const double sqrt_pi = std::sqrt(kPi);
    for (int i = 0; i < count; ++i) {
        gh.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        gh.weights[i] = sqrt_pi * v0 * v0;
    }
    return cache.emplace(count, std::move(gh)).first->second;
}

// Gaussian average < f(phi) >, phi ~ N(0, h/g), refined until two successive
// node counts agree; throws with the achieved error estimate otherwise.
template <typename F>
double gauss_average(double h, double g, F&& f, double tol) {
    const double scale = std::sqrt(2.0 * h / g); // phi = scale * x
    double previous = 0.0;
    bool have_previous = false;
    double last_diff = 0.0;
    for (int count = 64; count <= 4096; count *= 2) {
        const GaussHermite& gh = gauss_hermite(count);
        double acc = 0.0;
        for (int i = 0; i < count; ++i) acc += gh.weights[i] * f(scale * gh.nodes[i]);
        const double value = acc / std::sqrt(kPi);
        if (have_previous) {
            last_diff = std::abs(value - previous);
            if (last_diff < tol) return value;
        }
        previous = value;
        have_previous = true;
    }
    std::ostringstream msg;
    msg << "quadrature did not converge: successive refinements still differ by "
        << last_diff;
    throw std::runtime_error(msg.str());
}

// Numerator of the MIE formula; vanishes identically at n = 1.
double mie_numerator(double n, double zeta, double g) {
    const geom::CylinderData cyl = geom::make_cylinder(zeta);
    const double wn = winding_derivative(TheoryParams(g, n, zeta));
    const double w1 = winding_derivative(TheoryParams(g, 1.0, zeta));
    const double log_eta_n = sf::log_dedekind_eta_from_log_q(cyl.log_nome(n));
    const double log_eta_1 = sf::log_dedekind_eta_from_log_q(cyl.log_nome(1.0));
    return wn - n * w1 - (log_eta_n - n * log_eta_1);
}

double forced_numerator(double n, double zeta, double g) {
    const geom::CylinderData cyl = geom::make_cylinder(zeta);
    auto log_zd = [&](double renyi) {
        const double lq = cyl.log_nome(renyi);
        return sf::log_winding_sum_from_log_q(lq, g, 0.0) -
               sf::log_dedekind_eta_from_log_q(lq);
    };
    return log_zd(n) - n * log_zd(1.0);
}

// Richardson-extrapolated limit -N'(1) of N(n)/(1-n) for a numerator with
// N(1) = 0, using central differences at eps and eps/2.
template <typename Numerator>
LimitEstimate replica_limit(Numerator&& numerator) {
    auto central = [&](double eps) {
        return (numerator(1.0 + eps) - numerator(1.0 - eps)) / (2.0 * eps);
    };
    const double d1 = central(1e-2);
    const double d2 = central(5e-3);
    const double richardson = (4.0 * d2 - d1) / 3.0;
    return {-richardson, std::abs(d2 - d1) / 3.0};
}

} // namespace

TheoryParams::TheoryParams(double g_, double n_, double zeta_)
    : g(g_), n(n_), zeta(zeta_) {
    if (!(g > 0.0)) throw std::domain_error("TheoryParams: g must be positive");
    if (!(n > 0.0)) throw std::domain_error("TheoryParams: n must be positive");
    if (!(zeta > 0.0 && zeta < 1.0))
        throw std::domain_error("TheoryParams: zeta must lie in (0, 1)");
}

double winding_integral(const TheoryParams& p, double k) {
    const double big_q = 1.0 + p.n * k;
    if (!(big_q > 0.0))
        throw std::domain_error("winding_integral: 1 + n k must be positive");
    const geom::CylinderData cyl = geom::make_cylinder(p.zeta);
    const double log_q = cyl.log_nome(p.n);
    const double g = p.g;
    auto integrand = [&](double phi) {
        return std::exp(k * sf::log_winding_sum_from_log_q(log_q, g, phi / (2.0 * kPi)));
    };
    return std::sqrt(big_q) * gauss_average(cyl.h, g, integrand, 1e-10);
}

double winding_derivative(const TheoryParams& p) {
    const geom::CylinderData cyl = geom::make_cylinder(p.zeta);
    const double log_q = cyl.log_nome(p.n);
    const double g = p.g;
    auto integrand = [&](double phi) {
        return sf::log_winding_sum_from_log_q(log_q, g, phi / (2.0 * kPi));
    };
    return 0.5 * p.n + gauss_average(cyl.h, g, integrand, 1e-10);
}

double mie_renyi(const TheoryParams& p) {
    if (std::abs(p.n - 1.0) < 1e-12)
        throw std::invalid_argument("mie_renyi: n = 1 is the von Neumann limit");
    return mie_numerator(p.n, p.zeta, p.g) / (1.0 - p.n);
}

LimitEstimate mie_von_neumann_estimate(double zeta, double g) {
    return replica_limit([&](double n) { return mie_numerator(n, zeta, g); });
}

double mie_von_neumann(double zeta, double g) {
    return mie_von_neumann_estimate(zeta, g).value;
}

double mie_forced(const TheoryParams& p) {
    if (std::abs(p.n - 1.0) < 1e-12) {
        return replica_limit([&](double n) { return forced_numerator(n, p.zeta, p.g); })
            .value;
    }
    return forced_numerator(p.n, p.zeta, p.g) / (1.0 - p.n);
}

AsymptoticEstimate mie_asymptotic(const TheoryParams& p) {
    if (!(p.zeta < 0.05))
        throw std::domain_error("mie_asymptotic: only valid for zeta < 0.05");
    if (p.n < 0.5) {
        const double exponent = 2.0 * p.n * (1.0 - p.n) * p.g;
        return {std::pow(p.zeta, exponent), AsymptoticRegime::sub_half};
    }
    const double value =
        std::pow(p.zeta, 0.5 * p.g) / std::sqrt(std::log(1.0 / p.zeta));
    return {value, AsymptoticRegime::super_half};
}

namespace {

double born_weight_unnormalized(double delta, double h, double g, double log_q1) {
    // Gaussian factor folded to one period by explicit 2pi-shift summation.
    double gauss = 0.0;
    for (long s = 0;; ++s) {
        const double up = delta + 2.0 * kPi * static_cast<double>(s);
        const double dn = delta - 2.0 * kPi * static_cast<double>(s + 1);
        const double term = std::exp(-g * up * up / (2.0 * h)) +
                            std::exp(-g * dn * dn / (2.0 * h));
        gauss += term;
        if (term < 1e-18) break;
        if (s > 100000) throw std::runtime_error("born_weight_density: shift sum stalled");
    }
    return gauss * std::exp(sf::log_winding_sum_from_log_q(log_q1, g, delta / (2.0 * kPi)));
}

// plain adaptive Simpson on [a, b]
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

} // namespace

double born_weight_density(double zeta, double g, double delta_phi) {
    if (!(delta_phi >= 0.0 && delta_phi < 2.0 * kPi))
        throw std::domain_error("born_weight_density: delta_phi must lie in [0, 2pi)");
    const geom::CylinderData cyl = geom::make_cylinder(zeta);
    const double log_q1 = cyl.log_nome(1.0);
    auto u = [&](double d) { return born_weight_unnormalized(d, cyl.h, g, log_q1); };
    const double a = 0.0;
    const double b = 2.0 * kPi;
    const double m = kPi;
    const double norm =
        adaptive_simpson(u, a, b, u(a), u(m), u(b), 1e-13, 40);
    return u(delta_phi) / norm;
}

} // namespace mie::cft
