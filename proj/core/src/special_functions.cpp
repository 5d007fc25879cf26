#include "mie/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mie::sf {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Nome::Nome(double value) : q(value) {
    if (!(q >= 0.0 && q < 1.0))
        throw std::domain_error("Nome: q must lie in [0, 1)");
}

double agm(double a, double b) {
    // Quadratic convergence; the cap only guards the last-ulp stall.
    for (int it = 0; it < 64; ++it) {
        if (std::abs(a - b) <= 1e-16 * std::abs(a)) break;
        const double am = 0.5 * (a + b);
        const double gm = std::sqrt(a * b);
        a = am;
        b = gm;
    }
    return a;
}

double elliptic_k(double k) {
    if (!(k >= 0.0 && k < 1.0))
        throw std::domain_error("elliptic_k: modulus must lie in [0, 1)");
    // k' = sqrt((1-k)(1+k)) keeps precision for k near 1.
    const double kp = std::sqrt((1.0 - k) * (1.0 + k));
    return kPi / (2.0 * agm(1.0, kp));
}

double dedekind_eta(Nome nome) {
    const double q = nome.q;
    if (q == 0.0) return 0.0; // q^{1/24} prefactor vanishes
    if (q > 0.99) {
        // eta(e^{-2 pi t}) = eta(e^{-2 pi / t}) / sqrt(t); the dual nome is
        // tiny, so work in logs (the dual q^{1/24} may be subnormal-range).
        const double t = -std::log(q) / (2.0 * kPi);
        const double log_qd = -2.0 * kPi / t;
        return std::exp(log_dedekind_eta_from_log_q(log_qd) - 0.5 * std::log(t));
    }
    double prod = std::pow(q, 1.0 / 24.0);
    double qs = q;
    while (qs > 1e-16) {
        prod *= (1.0 - qs);
        qs *= q;
    }
    return prod;
}

double log_dedekind_eta_from_log_q(double log_q) {
    if (log_q == -kInf) return -kInf;
    if (!(log_q < 0.0))
        throw std::domain_error("log_dedekind_eta: log q must be negative");
    const double t = -log_q / (2.0 * kPi);
    if (t < 1.6e-3) { // q > ~0.99: modular transform
        return log_dedekind_eta_from_log_q(-2.0 * kPi / t) - 0.5 * std::log(t);
    }
    double acc = log_q / 24.0;
    double s_log = log_q;
    while (s_log > -37.0) { // e^{-37} ~ 8e-17
        acc += std::log1p(-std::exp(s_log));
        s_log += log_q;
    }
    return acc;
}

double log_dedekind_eta(Nome nome) {
    if (nome.q == 0.0) return -kInf;
    return log_dedekind_eta_from_log_q(std::log(nome.q));
}

namespace detail {

double winding_sum_direct(double log_q, double g, double a) {
    // Terms e^{-g l (w+a)^2}, l = ln(1/q); dominant term at w* = -round(a).
    const double l = -log_q;
    const long w0 = std::lround(-a);
    double total = 0.0;
    for (long step = 0;; ++step) {
        double term = 0.0;
        if (step == 0) {
            term = std::exp(-g * l * (static_cast<double>(w0) + a) * (static_cast<double>(w0) + a));
            total += term;
        } else {
            const double up = static_cast<double>(w0 + step) + a;
            const double dn = static_cast<double>(w0 - step) + a;
            const double tu = std::exp(-g * l * up * up);
            const double td = std::exp(-g * l * dn * dn);
            total += tu + td;
            term = tu + td;
        }
        if (step > 0 && term < 1e-16) break;
        if (step > 100000) throw std::runtime_error("winding_sum: direct series did not converge");
    }
    return total;
}

double winding_sum_poisson(double log_q, double g, double a) {
    const double l = -log_q;
    const double c = kPi * kPi / (g * l);
    double total = 1.0;
    for (long m = 1;; ++m) {
        const double term = 2.0 * std::exp(-c * static_cast<double>(m) * static_cast<double>(m)) *
                            std::cos(2.0 * kPi * static_cast<double>(m) * a);
        total += term;
        if (std::exp(-c * static_cast<double>(m) * static_cast<double>(m)) < 1e-17) break;
        if (m > 100000) throw std::runtime_error("winding_sum: dual series did not converge");
    }
    return std::sqrt(kPi / (g * l)) * total;
}

} // namespace detail

double winding_sum(Nome nome, double g, double a) {
    if (!(g > 0.0)) throw std::domain_error("winding_sum: g must be positive");
    const double q = nome.q;
    if (q == 0.0) {
        // Only a term with w + a = 0 survives (q^0 = 1 by convention).
        return (a == std::round(a)) ? 1.0 : 0.0;
    }
    const double log_q = std::log(q);
    if (q > detail::q_switch) return detail::winding_sum_poisson(log_q, g, a);
    return detail::winding_sum_direct(log_q, g, a);
}

double log_winding_sum_from_log_q(double log_q, double g, double a) {
    if (!(g > 0.0)) throw std::domain_error("log_winding_sum: g must be positive");
    if (log_q == -kInf) return (a == std::round(a)) ? 0.0 : -kInf;
    if (!(log_q < 0.0))
        throw std::domain_error("log_winding_sum: log q must be negative");
    if (log_q > -kPi) // q > e^{-pi}: dual series is O(1), plain log is safe
        return std::log(detail::winding_sum_poisson(log_q, g, a));
    // log-sum-exp around the dominant winding sector
    const double l = -log_q;
    const long w0 = std::lround(-a);
    const double peak = -g * l * (static_cast<double>(w0) + a) * (static_cast<double>(w0) + a);
    double rest = 0.0;
    for (long step = 0;; ++step) {
        double term;
        if (step == 0) {
            term = 1.0; // the peak itself
        } else {
            const double up = static_cast<double>(w0 + step) + a;
            const double dn = static_cast<double>(w0 - step) + a;
            term = std::exp(-g * l * up * up - peak) + std::exp(-g * l * dn * dn - peak);
        }
        rest += term;
        if (step > 0 && term < 1e-18) break;
        if (step > 100000) throw std::runtime_error("log_winding_sum: series did not converge");
    }
    return peak + std::log(rest);
}

double log_winding_sum(Nome nome, double g, double a) {
    if (nome.q == 0.0) return log_winding_sum_from_log_q(-kInf, g, a);
    return log_winding_sum_from_log_q(std::log(nome.q), g, a);
}

} // namespace mie::sf
