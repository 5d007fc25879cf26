#include "mie/gaussian_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mie::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNullThreshold = 1e-14;

struct Sector {
    bool antiperiodic;
    double energy;       // sum over the L/2 filled modes of 4 cos k
    double fermi_gap;    // energy gap across the Fermi level
    std::vector<double> filled; // momenta
};

Sector fill_sector(int length, bool antiperiodic) {
    std::vector<double> ks(length);
    for (int m = 0; m < length; ++m)
        ks[m] = 2.0 * kPi * (m + (antiperiodic ? 0.5 : 0.0)) / length;
    std::sort(ks.begin(), ks.end(),
              [](double a, double b) { return std::cos(a) < std::cos(b); });
    const int half = length / 2;
    Sector s;
    s.antiperiodic = antiperiodic;
    s.filled.assign(ks.begin(), ks.begin() + half);
    s.energy = 0.0;
    for (double k : s.filled) s.energy += 4.0 * std::cos(k);
    s.fermi_gap = 4.0 * (std::cos(ks[half]) - std::cos(ks[half - 1]));
    return s;
}

Sector ground_sector(int length) {
    if (length < 8 || length % 2 != 0)
        throw std::invalid_argument("xx_ground_state: L must be even and >= 8");
    const Sector apbc = fill_sector(length, true);
    const Sector pbc = fill_sector(length, false);
    const double gap_tol = 1e-9;
    const bool apbc_ok = apbc.fermi_gap > gap_tol;
    const bool pbc_ok = pbc.fermi_gap > gap_tol;
    if (apbc_ok && pbc_ok) return apbc.energy <= pbc.energy ? apbc : pbc;
    if (apbc_ok) return apbc;
    if (pbc_ok) return pbc;
    throw std::runtime_error("xx_ground_state: degenerate Fermi level in both sectors");
}

double uniform_double(std::uint64_t& state) {
    // xorshift-free: run splitmix64 as a counter-based stream; top 53 bits.
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

} // namespace

CorrelationMatrix xx_ground_state(int chain_length) {
    const Sector sector = ground_sector(chain_length);
    // translation invariance: one pass over distances, then Toeplitz fill
    std::vector<double> profile(chain_length);
    for (int d = 0; d < chain_length; ++d) {
        double acc = 0.0;
        for (double k : sector.filled) acc += std::cos(k * d);
        profile[d] = acc / chain_length;
    }
    Eigen::MatrixXd c(chain_length, chain_length);
    for (int j = 0; j < chain_length; ++j)
        for (int l = 0; l < chain_length; ++l)
            c(j, l) = profile[std::abs(j - l)];
    return CorrelationMatrix{std::move(c)};
}

double xx_ground_energy(int chain_length) {
    return ground_sector(chain_length).energy;
}

double born_probability(const CorrelationMatrix& c, int site) {
    return std::clamp(c.m(site, site), 0.0, 1.0);
}

void project_occupation_in_place(CorrelationMatrix& c, int site, int outcome) {
    const double p1 = born_probability(c, site);
    const double p = outcome == 1 ? p1 : 1.0 - p1;
    if (p < kNullThreshold)
        throw std::runtime_error("project_occupation: outcome has (near) zero Born probability");
    const int length = c.sites();
    if (outcome == 1) {
        const Eigen::VectorXd col = c.m.col(site);
        c.m.noalias() -= col * col.transpose() / p1;
    } else {
        // hole update without forming 1 - C:  C' = C + w w^T / (1-p1) - e_j e_j^T
        Eigen::VectorXd w = -c.m.col(site);
        w(site) += 1.0;
        c.m.noalias() += w * w.transpose() / (1.0 - p1);
    }
    // measured row/column is exactly deterministic from here on
    c.m.row(site).setZero();
    c.m.col(site).setZero();
    c.m(site, site) = outcome;
    (void)length;
}

CorrelationMatrix project_occupation(const CorrelationMatrix& c, int site, int outcome) {
    CorrelationMatrix out = c;
    project_occupation_in_place(out, site, outcome);
    return out;
}

double renyi_from_spectrum(std::span<const double> nu, double n) {
    double acc = 0.0;
    if (std::abs(n - 1.0) < 1e-12) {
        for (double v : nu) {
            const double x = std::clamp(v, 1e-12, 1.0 - 1e-12);
            acc -= x * std::log(x) + (1.0 - x) * std::log(1.0 - x);
        }
        return acc;
    }
    for (double v : nu) {
        const double x = std::clamp(v, 1e-12, 1.0 - 1e-12);
        acc += std::log(std::pow(x, n) + std::pow(1.0 - x, n));
    }
    return acc / (1.0 - n);
}

namespace {

Eigen::VectorXd block_spectrum(const Eigen::MatrixXd& m, std::span<const int> region) {
    const int r = static_cast<int>(region.size());
    Eigen::MatrixXd block(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) block(i, j) = m(region[i], region[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

} // namespace

double renyi_entropy(const CorrelationMatrix& c, std::span<const int> region, double n) {
    if (region.empty()) throw std::invalid_argument("renyi_entropy: empty region");
    const Eigen::VectorXd nu = block_spectrum(c.m, region);
    return renyi_from_spectrum(std::span<const double>(nu.data(), nu.size()), n);
}

std::pair<MeasurementRecord, CorrelationMatrix>
sample_trajectory(const CorrelationMatrix& c, std::span<const int> region, std::uint64_t seed) {
    std::vector<int> sites(region.begin(), region.end());
    std::sort(sites.begin(), sites.end()); // fixed left-to-right order
    MeasurementRecord record;
    CorrelationMatrix state = c;
    std::uint64_t rng = seed;
    for (int site : sites) {
        const double p1 = born_probability(state, site);
        const int outcome = uniform_double(rng) < p1 ? 1 : 0;
        project_occupation_in_place(state, site, outcome);
        record.outcomes.emplace_back(site, outcome);
        record.log_prob += std::log(outcome == 1 ? p1 : 1.0 - p1);
    }
    return {std::move(record), std::move(state)};
}

std::pair<MeasurementRecord, CorrelationMatrix>
apply_record(const CorrelationMatrix& c, std::span<const int> region,
             std::span<const int> outcomes) {
    if (region.size() != outcomes.size())
        throw std::invalid_argument("apply_record: region/outcome size mismatch");
    MeasurementRecord record;
    CorrelationMatrix state = c;
    for (std::size_t i = 0; i < region.size(); ++i) {
        const double p1 = born_probability(state, region[i]);
        const double p = outcomes[i] == 1 ? p1 : 1.0 - p1;
        project_occupation_in_place(state, region[i], outcomes[i]);
        record.outcomes.emplace_back(region[i], outcomes[i]);
        record.log_prob += std::log(p);
    }
    return {std::move(record), std::move(state)};
}

std::vector<int> neel_pattern(std::span<const int> region) {
    std::vector<int> out;
    out.reserve(region.size());
    for (int site : region) out.push_back(site % 2 == 0 ? 1 : 0);
    return out;
}

// ---- fast per-layout sampler ----

TrajectoryEngine::TrajectoryEngine(const CorrelationMatrix& ground,
                                   std::span<const int> region_a,
                                   std::span<const int> measured)
    : measured_(measured.begin(), measured.end()),
      a_size_(static_cast<int>(region_a.size())) {
    std::sort(measured_.begin(), measured_.end());
    // permuted order: A first, then measured sites with the FIRST-measured
    // site LAST, so each measurement peels off the trailing row/column.
    std::vector<int> order(region_a.begin(), region_a.end());
    order.insert(order.end(), measured_.rbegin(), measured_.rend());
    const int total = static_cast<int>(order.size());
    base_.resize(total, total);
    for (int i = 0; i < total; ++i)
        for (int j = 0; j < total; ++j) base_(i, j) = ground.m(order[i], order[j]);
}

std::uint64_t TrajectoryEngine::derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

TrajectoryEngine::Run
TrajectoryEngine::run_with(const std::function<int(int, double)>& choose) const {
    Eigen::MatrixXd m = base_;
    Run out;
    const int n_meas = static_cast<int>(measured_.size());
    for (int i = 0; i < n_meas; ++i) {
        const int j = a_size_ + n_meas - 1 - i; // trailing active index
        const double p1 = std::clamp(m(j, j), 0.0, 1.0);
        const int outcome = choose(i, p1);
        const double p = outcome == 1 ? p1 : 1.0 - p1;
        if (p < kNullThreshold)
            throw std::runtime_error("trajectory: outcome has (near) zero Born probability");
        // rank-1 update of the remaining block only (lower triangle)
        const Eigen::VectorXd v = m.row(j).head(j).transpose();
        if (outcome == 1) {
            m.topLeftCorner(j, j).selfadjointView<Eigen::Lower>().rankUpdate(v, -1.0 / p1);
        } else {
            m.topLeftCorner(j, j).selfadjointView<Eigen::Lower>().rankUpdate(v, 1.0 / (1.0 - p1));
        }
        out.record.outcomes.emplace_back(measured_[i], outcome);
        out.record.log_prob += std::log(p);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        m.topLeftCorner(a_size_, a_size_), Eigen::EigenvaluesOnly);
    out.spectrum = solver.eigenvalues();
    return out;
}

TrajectoryEngine::Run TrajectoryEngine::run(std::uint64_t trajectory_seed) const {
    std::uint64_t rng = trajectory_seed;
    return run_with([&rng](int, double p1) { return uniform_double(rng) < p1 ? 1 : 0; });
}

TrajectoryEngine::Run TrajectoryEngine::run_forced(std::span<const int> outcomes) const {
    if (outcomes.size() != measured_.size())
        throw std::invalid_argument("run_forced: pattern size mismatch");
    return run_with([outcomes](int i, double) { return outcomes[i]; });
}

std::vector<MieEstimate> estimate_mie_multi(const CorrelationMatrix& ground,
                                            const geom::AntipodalLayout& layout,
                                            std::span<const double> renyi_list,
                                            long n_traj, std::uint64_t seed,
                                            int threads) {
    const std::size_t n_indices = renyi_list.size();
    std::vector<MieEstimate> out(n_indices);
    for (std::size_t k = 0; k < n_indices; ++k) {
        out[k].renyi_n = renyi_list[k];
        out[k].n_traj = n_traj;
    }

    if (layout.measured.empty()) {
        // no measurement: MIE is the unmeasured ground-state entropy, exactly
        const Eigen::VectorXd nu = block_spectrum(ground.m, layout.region_a);
        for (std::size_t k = 0; k < n_indices; ++k)
            out[k].mean = renyi_from_spectrum({nu.data(), static_cast<std::size_t>(nu.size())},
                                              renyi_list[k]);
        return out;
    }

    const TrajectoryEngine engine(ground, layout.region_a, layout.measured);
    // per-trajectory entropies in index order; the reduction below is
    // sequential, so results do not depend on the thread count
    std::vector<std::vector<double>> samples(n_indices,
                                             std::vector<double>(static_cast<std::size_t>(n_traj)));
    auto work = [&](long begin, long end) {
        for (long t = begin; t < end; ++t) {
            const auto run = engine.run(TrajectoryEngine::derive_seed(seed, static_cast<std::uint64_t>(t)));
            const std::span<const double> nu(run.spectrum.data(),
                                             static_cast<std::size_t>(run.spectrum.size()));
            for (std::size_t k = 0; k < n_indices; ++k)
                samples[k][static_cast<std::size_t>(t)] = renyi_from_spectrum(nu, renyi_list[k]);
        }
    };
    if (threads <= 1) {
        work(0, n_traj);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (n_traj + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const long begin = w * chunk;
            const long end = std::min<long>(n_traj, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t k = 0; k < n_indices; ++k) {
        double mean = 0.0;
        for (double s : samples[k]) mean += s;
        mean /= static_cast<double>(n_traj);
        double var = 0.0;
        for (double s : samples[k]) var += (s - mean) * (s - mean);
        var /= static_cast<double>(n_traj > 1 ? n_traj - 1 : 1);
        out[k].mean = mean;
        out[k].std_error = std::sqrt(var / static_cast<double>(n_traj));
    }
    return out;
}

MieEstimate estimate_mie(int chain_length, const geom::AntipodalLayout& layout,
                         double n, long n_traj, std::uint64_t seed, int threads) {
    if (chain_length != layout.chain_length)
        throw std::invalid_argument("estimate_mie: layout does not match chain length");
    const CorrelationMatrix ground = xx_ground_state(chain_length);
    const double renyi[] = {n};
    return estimate_mie_multi(ground, layout, renyi, n_traj, seed, threads)[0];
}

ExhaustiveMie exhaustive_mie(const CorrelationMatrix& ground,
                             const geom::AntipodalLayout& layout,
                             std::span<const double> renyi_list) {
    const std::size_t n_sites = layout.measured.size();
    if (n_sites > 20)
        throw std::invalid_argument("exhaustive_mie: too many measured sites to enumerate");
    const TrajectoryEngine engine(ground, layout.region_a, layout.measured);
    ExhaustiveMie out;
    out.values.assign(renyi_list.size(), 0.0);
    std::vector<int> outcomes(n_sites);
    for (std::uint64_t bits = 0; bits < (1ULL << n_sites); ++bits) {
        for (std::size_t i = 0; i < n_sites; ++i) outcomes[i] = (bits >> i) & 1ULL;
        TrajectoryEngine::Run run;
        try {
            run = engine.run_forced(outcomes);
        } catch (const std::runtime_error&) {
            continue; // null branch, Born weight ~ 0
        }
        const double p = std::exp(run.record.log_prob);
        out.probability_sum += p;
        const std::span<const double> nu(run.spectrum.data(),
                                         static_cast<std::size_t>(run.spectrum.size()));
        for (std::size_t k = 0; k < renyi_list.size(); ++k)
            out.values[k] += p * renyi_from_spectrum(nu, renyi_list[k]);
    }
    return out;
}

std::vector<double> forced_mie(const CorrelationMatrix& ground,
                               const geom::AntipodalLayout& layout,
                               std::span<const double> renyi_list) {
    const TrajectoryEngine engine(ground, layout.region_a, layout.measured);
    const std::vector<int> pattern = neel_pattern(layout.measured);
    const auto run = engine.run_forced(pattern);
    const std::span<const double> nu(run.spectrum.data(),
                                     static_cast<std::size_t>(run.spectrum.size()));
    std::vector<double> out;
    out.reserve(renyi_list.size());
    for (double n : renyi_list) out.push_back(renyi_from_spectrum(nu, n));
    return out;
}

double mutual_information(const CorrelationMatrix& c, std::span<const int> region_a,
                          std::span<const int> region_b, double n) {
    if (region_b.empty()) return 0.0;
    if (region_a.empty()) return 0.0;
    std::vector<int> joint(region_a.begin(), region_a.end());
    joint.insert(joint.end(), region_b.begin(), region_b.end());
    std::sort(joint.begin(), joint.end());
    if (std::adjacent_find(joint.begin(), joint.end()) != joint.end())
        throw std::invalid_argument("mutual_information: regions must be disjoint");
    return renyi_entropy(c, region_a, n) + renyi_entropy(c, region_b, n) -
           renyi_entropy(c, joint, n);
}

} // namespace mie::sim
