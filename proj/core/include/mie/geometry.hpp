#ifndef MIE_GEOMETRY_HPP
#define MIE_GEOMETRY_HPP

#include <vector>

#include "mie/special_functions.hpp"

namespace mie::geom {

/// Four marked points on a ring of circumference `length`, cyclically
/// ordered x1 < x2 < x3 < x4 < x1 + length. A = [x1,x2], B = [x3,x4];
/// the measured region is the complement [x2,x3] u [x4,x1+L].
struct RingGeometry {
    double length;
    double x1, x2, x3, x4;
    RingGeometry(double L, double x1, double x2, double x3, double x4);
};

/// Chord distance on the ring, (L/pi) sin(pi x / L).
double chord(double length, double separation);

/// Conformal cross ratio zeta = w12 w34 / (w13 w24) built from chords;
/// lies in (0,1) for any valid cyclic ordering.
double cross_ratio(const RingGeometry& geom);

/// Clamp zeta into [1e-12, 1 - 1e-12] ahead of the elliptic calls.
double clip_zeta(double zeta);

/// Height h(zeta) = 2 pi K(k) / K(k'), k = (1 - sqrt(1-zeta))/(1 + sqrt(1-zeta)),
/// of the finite cylinder with circumference 2 pi. Monotone, h(0+) = 0,
/// h(1-) = inf; h(zeta) h(zeta*) = 4 pi^2 at the dual point k(zeta*) = k'.
double cylinder_height(double zeta);

/// Modulus k(zeta), evaluated in the cancellation-free form zeta/(1+sqrt(1-zeta))^2.
double modulus_from_zeta(double zeta);

/// Nome q_n = exp(-2 pi^2 n / h).
sf::Nome nome(double h, double n);
double log_nome(double h, double n);

/// Cross-ratio plus derived cylinder data for one geometry.
struct CylinderData {
    double zeta;
    double h;
    sf::Nome nome(double n) const { return geom::nome(h, n); }
    double log_nome(double n) const { return geom::log_nome(h, n); }
};
CylinderData make_cylinder(double zeta);

/// Antipodal symmetric lattice layout on an L-site periodic chain:
/// A and B are blocks of `block_len` sites placed diametrically opposite,
/// the two measured regions between them have `measured_len` sites each,
/// L = 2*block_len + 2*measured_len. Site intervals are mapped to continuum
/// endpoints with the midpoint-of-bond convention {j,...,j+l-1} -> [j-1/2, j+l-1/2].
struct AntipodalLayout {
    int chain_length = 0;
    int block_len = 0;    // |A| = |B|
    int measured_len = 0; // |C1| = |C2|
    std::vector<int> region_a;
    std::vector<int> region_b;
    std::vector<int> measured; // C1 then C2, ascending site order
    double zeta = 0.0;

    RingGeometry geometry() const; // throws for measured_len == 0 (degenerate)
};

AntipodalLayout antipodal_layout(int chain_length, int measured_len);

} // namespace mie::geom

#endif
