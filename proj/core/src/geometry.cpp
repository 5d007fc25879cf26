#include "mie/geometry.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mie::geom {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

RingGeometry::RingGeometry(double L, double a1, double a2, double a3, double a4)
    : length(L), x1(a1), x2(a2), x3(a3), x4(a4) {
    if (!(L > 0.0)) throw std::invalid_argument("RingGeometry: length must be positive");
    if (!(x1 < x2 && x2 < x3 && x3 < x4 && x4 < x1 + L))
        throw std::invalid_argument("RingGeometry: endpoints must be cyclically ordered");
}

double chord(double length, double separation) {
    return length / kPi * std::sin(kPi * separation / length);
}

double cross_ratio(const RingGeometry& g) {
    const double w12 = chord(g.length, g.x2 - g.x1);
    const double w34 = chord(g.length, g.x4 - g.x3);
    const double w13 = chord(g.length, g.x3 - g.x1);
    const double w24 = chord(g.length, g.x4 - g.x2);
    if (w12 == 0.0 || w34 == 0.0 || w13 == 0.0 || w24 == 0.0)
        throw std::domain_error("cross_ratio: degenerate interval (vanishing chord)");
    return (w12 * w34) / (w13 * w24);
}

double clip_zeta(double zeta) {
    if (zeta < 1e-12) return 1e-12;
    if (zeta > 1.0 - 1e-12) return 1.0 - 1e-12;
    return zeta;
}

double modulus_from_zeta(double zeta) {
    const double s = std::sqrt(1.0 - zeta);
    return zeta / ((1.0 + s) * (1.0 + s));
}

double cylinder_height(double zeta) {
    if (!(zeta > 0.0 && zeta < 1.0))
        throw std::domain_error("cylinder_height: zeta must lie in (0, 1)");
    zeta = clip_zeta(zeta);
    const double s = std::sqrt(1.0 - zeta);
    const double k = zeta / ((1.0 + s) * (1.0 + s));
    const double one_minus_k = 2.0 * s / (1.0 + s);
    const double kp = std::sqrt(one_minus_k * (1.0 + k));
    // K(k) = pi/(2 agm(1,k')), K(k') = pi/(2 agm(1,k)); the ratio needs no pi.
    return 2.0 * kPi * sf::agm(1.0, k) / sf::agm(1.0, kp);
}

sf::Nome nome(double h, double n) {
    if (!(h > 0.0)) throw std::domain_error("nome: h must be positive");
    if (!(n > 0.0)) throw std::domain_error("nome: n must be positive");
    return sf::Nome(std::exp(-2.0 * kPi * kPi * n / h));
}

double log_nome(double h, double n) {
    if (!(h > 0.0)) throw std::domain_error("log_nome: h must be positive");
    if (!(n > 0.0)) throw std::domain_error("log_nome: n must be positive");
    return -2.0 * kPi * kPi * n / h;
}

CylinderData make_cylinder(double zeta) {
    CylinderData d;
    d.zeta = clip_zeta(zeta);
    d.h = cylinder_height(d.zeta);
    return d;
}

RingGeometry AntipodalLayout::geometry() const {
    if (measured_len == 0)
        throw std::domain_error("AntipodalLayout: measured_len = 0 has no four-point geometry");
    const double a = static_cast<double>(block_len);
    const double c = static_cast<double>(measured_len);
    // midpoint-of-bond endpoints; the common -1/2 shift drops out of zeta
    return RingGeometry(static_cast<double>(chain_length),
                        -0.5, a - 0.5, a + c - 0.5, 2.0 * a + c - 0.5);
}

AntipodalLayout antipodal_layout(int chain_length, int measured_len) {
    if (chain_length < 4 || chain_length % 2 != 0)
        throw std::invalid_argument("antipodal_layout: chain length must be even and >= 4");
    if (measured_len < 0 || 2 * measured_len > chain_length - 2)
        throw std::invalid_argument("antipodal_layout: measured length leaves no room for A, B");

    AntipodalLayout lay;
    lay.chain_length = chain_length;
    lay.measured_len = measured_len;
    lay.block_len = chain_length / 2 - measured_len;

    const int a = lay.block_len;
    const int c = lay.measured_len;
    lay.region_a.resize(a);
    std::iota(lay.region_a.begin(), lay.region_a.end(), 0);
    lay.region_b.resize(a);
    std::iota(lay.region_b.begin(), lay.region_b.end(), a + c);
    lay.measured.reserve(2 * c);
    for (int j = a; j < a + c; ++j) lay.measured.push_back(j);
    for (int j = 2 * a + c; j < chain_length; ++j) lay.measured.push_back(j);

    // c = 0 degenerates to adjacent A, B; attach the clipped limiting value.
    lay.zeta = (c == 0) ? clip_zeta(1.0) : clip_zeta(cross_ratio(lay.geometry()));
    return lay;
}

} // namespace mie::geom
