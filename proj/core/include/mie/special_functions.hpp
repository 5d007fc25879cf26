#ifndef MIE_SPECIAL_FUNCTIONS_HPP
#define MIE_SPECIAL_FUNCTIONS_HPP

namespace mie::sf {

/// Boltzmann nome of a finite cylinder, q = exp(-2 pi^2 n / h).
/// Valid range [0, 1); q = 1 is rejected everywhere (divergent sums).
struct Nome {
    double q = 0.0;
    explicit Nome(double value);
};

/// Complete elliptic integral of the first kind K(k), modulus convention,
/// 0 <= k < 1. Computed by the arithmetic-geometric mean,
///   K(k) = pi / (2 agm(1, k')),  k' = sqrt(1 - k^2),
/// which converges quadratically; relative accuracy ~1e-15.
double elliptic_k(double k);

/// Arithmetic-geometric mean of (a, b), a, b > 0.
double agm(double a, double b);

/// Dedekind eta, eta(q) = q^{1/24} prod_{s>=1} (1 - q^s).
/// The product is truncated once the next factor differs from 1 by less
/// than 1e-16. For q > 0.99 the dual-nome modular transform
///   eta(e^{-2 pi t}) = eta(e^{-2 pi / t}) / sqrt(t)
/// is used instead of a >10^4-term product.
double dedekind_eta(Nome q);

/// log eta(q), accumulated as (1/24) log q + sum_s log1p(-q^s).
/// Stays finite-precision deep in the q -> 0 corner where eta underflows.
double log_dedekind_eta(Nome q);
double log_dedekind_eta_from_log_q(double log_q);

/// Displaced Gaussian winding sum T(q, g, a) = sum_{w in Z} q^{g (w+a)^2}.
/// Direct summation for q <= q_switch = e^{-pi}; Poisson-resummed dual
/// series otherwise:
///   T = sqrt(pi/(g l)) sum_m e^{-pi^2 m^2/(g l)} cos(2 pi m a),  l = ln(1/q).
/// Absolute accuracy ~1e-14. Symmetric in a -> -a and periodic a -> a+1.
double winding_sum(Nome q, double g, double a);

/// log T(q, g, a) with the sum carried in log space; usable where the
/// individual terms (or T itself) underflow. Parameterized by log q so the
/// nome never has to be representable. Returns -inf for q = 0, a not integer.
double log_winding_sum_from_log_q(double log_q, double g, double a);
double log_winding_sum(Nome q, double g, double a);

namespace detail {
// Both branches exposed so the crossover can be checked independently.
double winding_sum_direct(double log_q, double g, double a);
double winding_sum_poisson(double log_q, double g, double a);
inline constexpr double q_switch = 0.04321391826377224; // e^{-pi}
}

} // namespace mie::sf

#endif
