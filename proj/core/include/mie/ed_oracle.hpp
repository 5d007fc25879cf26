#ifndef MIE_ED_ORACLE_HPP
#define MIE_ED_ORACLE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "mie/geometry.hpp"
#include "mie/gaussian_sim.hpp"

namespace mie::ed {

/// Full state vector of an L-site spin-1/2 chain, L <= 14. Basis index bit j
/// is the occupation n_j = (1 + sigma^z_j)/2 of site j.
struct SpinState {
    Eigen::VectorXcd amplitudes;
    int sites = 0;
};

/// Ground state of the periodic XXZ chain
///   H = sum_j sigma^x_j sigma^x_{j+1} + sigma^y sigma^y + Delta sigma^z sigma^z
/// in the zero-magnetization sector. Dense diagonalization for L <= 10,
/// Lanczos with full reorthogonalization above. A degenerate sector ground
/// state or a non-converged solve throws.
SpinState xxz_ground_state(int chain_length, double delta);
double xxz_ground_energy(int chain_length, double delta);

/// Luttinger parameter of the XXZ critical phase, Delta = -cos(pi g),
/// i.e. g = arccos(-Delta)/pi for Delta in (-1, 1].
double luttinger_g(double delta);

/// One projective sigma^z measurement branch.
struct Branch {
    sim::MeasurementRecord record;
    SpinState state;    // normalized conditional state
    double probability; // squared norm before renormalization
};

struct MeasureSpec {
    enum class Kind { sample, forced, enumerate_all } kind;
    std::uint64_t seed = 0;
    std::vector<int> pattern;
    static MeasureSpec sample(std::uint64_t seed);
    static MeasureSpec forced(std::vector<int> pattern);
    static MeasureSpec enumerate_all();
};

/// Apply (1 +- sigma^z)/2 projectors on the listed sites (ascending order).
/// enumerate mode returns every non-null branch of the 2^|C| outcomes with
/// probabilities summing to 1; sample and forced return a single branch.
std::vector<Branch> measure_sites(const SpinState& state, std::span<const int> region,
                                  const MeasureSpec& spec);

/// Renyi entropy from the reduced density matrix of an arbitrary
/// (possibly non-contiguous) site set: S_n = log(sum lambda^n)/(1-n),
/// S_1 = -sum lambda log lambda.
double region_entropy(const SpinState& state, std::span<const int> region, double n);

/// Exact Born-weighted MIE, sum_m p_m S_n(A | m), by full enumeration over
/// the measured region (|C| <= 12).
double mie_exact(int chain_length, const geom::AntipodalLayout& layout, double delta,
                 double n);

} // namespace mie::ed

#endif
