#ifndef MIE_CFT_MIE_HPP
#define MIE_CFT_MIE_HPP

#include "mie/geometry.hpp"

namespace mie::cft {

/// Point in theory-parameter space: Luttinger parameter g > 0, Renyi index
/// n > 0, cross ratio zeta in (0,1). n = 1 is legal for the winding
/// operations but rejected by mie_renyi / mie_forced (use the n -> 1 limits).
struct TheoryParams {
    double g;
    double n;
    double zeta;
    TheoryParams(double g, double n, double zeta);
};

/// Winding integral
///   W_{n,k}(zeta, g) = sqrt((1+nk) g / (2 pi h)) *
///     int dphi e^{-g phi^2 / (2h)} [ T(q_n, g, phi/2pi) ]^k
/// over the full real line, evaluated by Gauss-Hermite quadrature with the
/// node count doubled from 64 until successive refinements agree to 1e-10.
/// W_{n,0} = 1 identically (Gaussian normalization). The nominal domain is
/// k >= 0; small negative k with 1 + nk > 0 is accepted so the k -> 0
/// derivative can be probed from both sides.
double winding_integral(const TheoryParams& p, double k);

/// Replica derivative W'_n = lim_{k->0} d/dk W_{n,k}
///                        = n/2 + < log T(q_n, g, phi/2pi) >_G,
/// the Gaussian average taken with variance h/g.
double winding_derivative(const TheoryParams& p);

/// Renyi measurement-induced entanglement (nats),
///   MIE^(n) = [ W'_n - n W'_1 - log( eta(q_n) / eta(q_1)^n ) ] / (1 - n).
/// Requires n != 1.
double mie_renyi(const TheoryParams& p);

/// n -> 1 (von Neumann) limit of mie_renyi, via Richardson-extrapolated
/// central differences of the numerator around n = 1.
double mie_von_neumann(double zeta, double g);

struct LimitEstimate {
    double value;
    double spread; // disagreement between the two extrapolation stages
};
LimitEstimate mie_von_neumann_estimate(double zeta, double g);

/// Forced (post-selected Dirichlet/Neel) counterpart,
///   MIE_F^(n) = log( Z_D(q_n) / Z_D(q_1)^n ) / (1 - n),
/// with Z_D(q) = T(q, g, 0) / eta(q) the Dirichlet cylinder partition
/// function. n = 1 is routed through the same limiting scheme as
/// mie_von_neumann.
double mie_forced(const TheoryParams& p);

enum class AsymptoticRegime { sub_half, super_half };

struct AsymptoticEstimate {
    double value; // leading scaling form, undetermined overall constant
    AsymptoticRegime regime;
};

/// Leading small-zeta law: zeta^{2n(1-n)g} for n < 1/2 (sub_half),
/// zeta^{g/2} / sqrt(log(1/zeta)) for n >= 1/2 (super_half). Only the
/// exponent (and the presence of the sqrt-log factor) is meaningful; the
/// overall constant is not predicted. Requires zeta < 0.05.
AsymptoticEstimate mie_asymptotic(const TheoryParams& p);

/// Born weight over the Dirichlet boundary-condition mismatch
/// dphi in [0, 2pi): the Gaussian factor e^{-g d^2/(2h)} summed over
/// 2pi-shifts of d, times T(q_1, g, d/2pi), normalized to unit integral
/// over one period.
double born_weight_density(double zeta, double g, double delta_phi);

} // namespace mie::cft

#endif
