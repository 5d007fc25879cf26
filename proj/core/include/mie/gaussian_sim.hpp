#ifndef MIE_GAUSSIAN_SIM_HPP
#define MIE_GAUSSIAN_SIM_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mie/geometry.hpp"

namespace mie::sim {

/// One-body correlation matrix C_jk = <c+_j c_k> of a Gaussian (free-fermion)
/// state. For the XX ground state and occupation measurements everything
/// stays real, so the matrix is stored real symmetric; spectrum lies in
/// [0,1] and the trace counts particles.
struct CorrelationMatrix {
    Eigen::MatrixXd m;
    int sites() const { return static_cast<int>(m.rows()); }
};

/// Half-filled Fermi sea of the periodic XX chain, L even. The fermionic
/// boundary sector (periodic vs antiperiodic, from the spin-fermion mapping)
/// is resolved by filling L/2 modes in both sectors and keeping the
/// non-degenerate one of lower energy. Result is real symmetric, translation
/// invariant, C_jj = 1/2.
CorrelationMatrix xx_ground_state(int chain_length);

/// Mode energies 4 cos(k) of the chosen sector lowest-first (diagnostics /
/// cross-checks against exact diagonalization).
double xx_ground_energy(int chain_length);

/// Born probability of finding the site occupied, p(n_j = 1) = C_jj in [0,1].
double born_probability(const CorrelationMatrix& c, int site);

/// Conditional-Gaussian update for a projective occupation measurement.
/// outcome 1:  C' = C - (C e_j)(e_j^T C)/C_jj + e_j e_j^T
/// outcome 0:  same update on the hole matrix 1 - C.
/// Throws if the Born probability of the requested outcome is below 1e-14
/// (attempted post-selection on a null event). Afterwards row/column j is
/// deterministic.
void project_occupation_in_place(CorrelationMatrix& c, int site, int outcome);
CorrelationMatrix project_occupation(const CorrelationMatrix& c, int site, int outcome);

/// Renyi entropy of a subregion from the correlation spectrum {nu}:
///   S_n = 1/(1-n) sum log(nu^n + (1-nu)^n),  S_1 = -sum [nu log nu + ...],
/// eigenvalues clamped to [1e-12, 1-1e-12] (pure-sector values sit at 0/1).
double renyi_entropy(const CorrelationMatrix& c, std::span<const int> region, double n);
double renyi_from_spectrum(std::span<const double> nu, double n);

/// Ordered projective record; log_prob accumulates the natural-log Born
/// probability of the branch.
struct MeasurementRecord {
    std::vector<std::pair<int, int>> outcomes; // (site, occupation)
    double log_prob = 0.0;
};

/// Measure the given sites in ascending site order, drawing outcomes from
/// the Born rule (deterministic for a fixed seed), and return the record
/// together with the conditional state.
std::pair<MeasurementRecord, CorrelationMatrix>
sample_trajectory(const CorrelationMatrix& c, std::span<const int> region, std::uint64_t seed);

/// Apply a fixed outcome pattern (post-selection); throws on null branches.
std::pair<MeasurementRecord, CorrelationMatrix>
apply_record(const CorrelationMatrix& c, std::span<const int> region,
             std::span<const int> outcomes);

/// Global Neel pattern |1010...>: occupied on even sites.
std::vector<int> neel_pattern(std::span<const int> region);

/// Monte Carlo estimate of the Born-averaged post-measurement entropy of A.
struct MieEstimate {
    double mean = 0.0;
    double std_error = 0.0; // sample std dev / sqrt(n_traj)
    long n_traj = 0;
    double renyi_n = 1.0;
};

/// Trajectory sampler specialized to a fixed layout: keeps only the rows and
/// columns that are still needed (region A plus not-yet-measured sites), so
/// a trajectory costs O((|A|+|C|)^3 / 3) instead of |C| L^2.
class TrajectoryEngine {
  public:
    TrajectoryEngine(const CorrelationMatrix& ground, std::span<const int> region_a,
                     std::span<const int> measured);

    struct Run {
        MeasurementRecord record;
        Eigen::VectorXd spectrum; // correlation spectrum of the A block
    };
    Run run(std::uint64_t trajectory_seed) const;
    Run run_forced(std::span<const int> outcomes) const;

    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

  private:
    Run run_with(const std::function<int(int /*meas index*/, double /*p1*/)>& choose) const;
    Eigen::MatrixXd base_; // permuted [A | measured sites, last measured first]
    std::vector<int> measured_; // ascending site order = measurement order
    int a_size_ = 0;
};

/// estimate_mie over an antipodal layout; trajectories are shared across the
/// Renyi indices (the record does not depend on n). Results are bit-exact
/// for a fixed seed independent of the thread count.
std::vector<MieEstimate> estimate_mie_multi(const CorrelationMatrix& ground,
                                            const geom::AntipodalLayout& layout,
                                            std::span<const double> renyi_list,
                                            long n_traj, std::uint64_t seed,
                                            int threads = 1);
MieEstimate estimate_mie(int chain_length, const geom::AntipodalLayout& layout,
                         double n, long n_traj, std::uint64_t seed, int threads = 1);

/// Exact Born-weighted MIE by exhaustive enumeration of all 2^|C| records
/// (skipping null branches). Returns the values for each requested n and the
/// total branch probability (should be 1).
struct ExhaustiveMie {
    std::vector<double> values;
    double probability_sum = 0.0;
};
ExhaustiveMie exhaustive_mie(const CorrelationMatrix& ground,
                             const geom::AntipodalLayout& layout,
                             std::span<const double> renyi_list);

/// Neel-post-selected entropies of A (forced counterpart of estimate_mie).
std::vector<double> forced_mie(const CorrelationMatrix& ground,
                               const geom::AntipodalLayout& layout,
                               std::span<const double> renyi_list);

/// Pre-measurement mutual information I_n(A:B) = S_n(A) + S_n(B) - S_n(AuB)
/// from the correlation matrix.
double mutual_information(const CorrelationMatrix& c, std::span<const int> region_a,
                          std::span<const int> region_b, double n);

} // namespace mie::sim

#endif
