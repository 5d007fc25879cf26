#include "mie/ed_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace mie::ed {

namespace {

constexpr double kNullThreshold = 1e-14;

std::vector<std::uint32_t> sector_basis(int length) {
    std::vector<std::uint32_t> basis;
    const std::uint32_t limit = 1u << length;
    for (std::uint32_t s = 0; s < limit; ++s)
        if (std::popcount(s) == length / 2) basis.push_back(s);
    return basis;
}

int basis_index(const std::vector<std::uint32_t>& basis, std::uint32_t state) {
    const auto it = std::lower_bound(basis.begin(), basis.end(), state);
    return static_cast<int>(it - basis.begin());
}

// y += H x in the zero-magnetization sector
void apply_h(const std::vector<std::uint32_t>& basis, int length, double delta,
             const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const int dim = static_cast<int>(basis.size());
    y.setZero();
    for (int i = 0; i < dim; ++i) {
        const std::uint32_t s = basis[i];
        double diag = 0.0;
        for (int j = 0; j < length; ++j) {
            const int jp = (j + 1) % length;
            const int bj = (s >> j) & 1u;
            const int bp = (s >> jp) & 1u;
            diag += delta * (2 * bj - 1) * (2 * bp - 1);
            if (bj != bp) {
                const std::uint32_t flipped = s ^ ((1u << j) | (1u << jp));
                y(basis_index(basis, flipped)) += 2.0 * x(i);
            }
        }
        y(i) += diag * x(i);
    }
}

Eigen::MatrixXd dense_h(const std::vector<std::uint32_t>& basis, int length, double delta) {
    const int dim = static_cast<int>(basis.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd col(dim);
    for (int i = 0; i < dim; ++i) {
        x(i) = 1.0;
        apply_h(basis, length, delta, x, col);
        h.col(i) = col;
        x(i) = 0.0;
    }
    return h;
}

struct SectorGround {
    double energy;
    Eigen::VectorXd vector;
};

SectorGround lanczos_ground(const std::vector<std::uint32_t>& basis, int length,
                            double delta) {
    const int dim = static_cast<int>(basis.size());
    const int max_iter = std::min(dim, 400);
    std::vector<Eigen::VectorXd> v;
    std::vector<double> alpha, beta;

    // deterministic pseudo-random start
    Eigen::VectorXd v0(dim);
    std::uint64_t s = 0x6d1e35c7a9f24b01ULL;
    for (int i = 0; i < dim; ++i) {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        v0(i) = static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53 - 0.5;
    }
    v0.normalize();
    v.push_back(v0);

    Eigen::VectorXd w(dim);
    double e_prev = 0.0;
    for (int m = 0; m < max_iter; ++m) {
        apply_h(basis, length, delta, v[m], w);
        if (m > 0) w -= beta[m - 1] * v[m - 1];
        alpha.push_back(v[m].dot(w));
        w -= alpha[m] * v[m];
        for (const auto& u : v) w -= u.dot(w) * u; // full reorthogonalization
        for (const auto& u : v) w -= u.dot(w) * u;
        beta.push_back(w.norm());

        if (m >= 3 || beta[m] < 1e-13) {
            const int k = m + 1;
            Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
            for (int i = 0; i < k; ++i) {
                tri(i, i) = alpha[i];
                if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
            const double e0 = solver.eigenvalues()(0);
            const double residual = std::abs(beta[m] * solver.eigenvectors()(k - 1, 0));
            const bool stationary = std::abs(e0 - e_prev) < 1e-12 * std::max(1.0, std::abs(e0));
            e_prev = e0;
            if ((residual < 1e-11 && stationary) || beta[m] < 1e-13 || m == max_iter - 1) {
                if (k > 1) {
                    const double gap = solver.eigenvalues()(1) - e0;
                    if (gap < 1e-8 * std::max(1.0, std::abs(e0)))
                        throw std::runtime_error("xxz_ground_state: degenerate sector ground state");
                }
                if (residual >= 1e-9 && beta[m] >= 1e-13)
                    throw std::runtime_error("xxz_ground_state: Lanczos did not converge");
                Eigen::VectorXd ground = Eigen::VectorXd::Zero(dim);
                for (int i = 0; i < k; ++i) ground += solver.eigenvectors()(i, 0) * v[i];
                ground.normalize();
                return {e0, std::move(ground)};
            }
        }
        v.push_back(w / beta[m]);
    }
    throw std::runtime_error("xxz_ground_state: Lanczos did not converge");
}

SectorGround sector_ground(int length, double delta) {
    const auto basis = sector_basis(length);
    if (length <= 10) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_h(basis, length, delta));
        const double e0 = solver.eigenvalues()(0);
        const double gap = solver.eigenvalues()(1) - e0;
        if (gap < 1e-8 * std::max(1.0, std::abs(e0)))
            throw std::runtime_error("xxz_ground_state: degenerate sector ground state");
        return {e0, solver.eigenvectors().col(0)};
    }
    return lanczos_ground(basis, length, delta);
}

void check_args(int length, double delta) {
    if (length < 2 || length > 14 || length % 2 != 0)
        throw std::invalid_argument("xxz_ground_state: L must be even, 2 <= L <= 14");
    if (!(delta > -1.0 && delta <= 1.0))
        throw std::domain_error("xxz_ground_state: Delta must lie in (-1, 1]");
}

} // namespace

SpinState xxz_ground_state(int chain_length, double delta) {
    check_args(chain_length, delta);
    const auto basis = sector_basis(chain_length);
    const SectorGround ground = sector_ground(chain_length, delta);
    SpinState state;
    state.sites = chain_length;
    state.amplitudes = Eigen::VectorXcd::Zero(1 << chain_length);
    for (std::size_t i = 0; i < basis.size(); ++i)
        state.amplitudes(basis[i]) = ground.vector(static_cast<int>(i));
    return state;
}

double xxz_ground_energy(int chain_length, double delta) {
    check_args(chain_length, delta);
    return sector_ground(chain_length, delta).energy;
}

double luttinger_g(double delta) {
    if (!(delta > -1.0 && delta <= 1.0))
        throw std::domain_error("luttinger_g: Delta must lie in (-1, 1]");
    return std::acos(-delta) / 3.14159265358979323846;
}

MeasureSpec MeasureSpec::sample(std::uint64_t seed) {
    return {Kind::sample, seed, {}};
}
MeasureSpec MeasureSpec::forced(std::vector<int> pattern) {
    return {Kind::forced, 0, std::move(pattern)};
}
MeasureSpec MeasureSpec::enumerate_all() {
    return {Kind::enumerate_all, 0, {}};
}

namespace {

double occupied_weight(const Eigen::VectorXcd& amp, int site) {
    double p1 = 0.0;
    const std::uint32_t mask = 1u << site;
    for (int s = 0; s < amp.size(); ++s)
        if (s & mask) p1 += std::norm(amp(s));
    return p1;
}

void project_site(Eigen::VectorXcd& amp, int site, int outcome) {
    const std::uint32_t mask = 1u << site;
    for (int s = 0; s < amp.size(); ++s)
        if (static_cast<int>((s & mask) != 0) != outcome) amp(s) = 0.0;
}

Branch apply_pattern(const SpinState& state, std::span<const int> region,
                     std::span<const int> outcomes, bool allow_null) {
    Branch branch;
    branch.state.sites = state.sites;
    Eigen::VectorXcd amp = state.amplitudes;
    for (std::size_t i = 0; i < region.size(); ++i)
        project_site(amp, region[i], outcomes[i]);
    branch.probability = amp.squaredNorm();
    if (branch.probability < kNullThreshold && !allow_null)
        throw std::runtime_error("measure_sites: forced outcome has (near) zero probability");
    if (branch.probability > 0.0) amp /= std::sqrt(branch.probability);
    branch.state.amplitudes = std::move(amp);
    for (std::size_t i = 0; i < region.size(); ++i)
        branch.record.outcomes.emplace_back(region[i], outcomes[i]);
    branch.record.log_prob = std::log(std::max(branch.probability, 1e-300));
    return branch;
}

double uniform_double(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
}

} // namespace

std::vector<Branch> measure_sites(const SpinState& state, std::span<const int> region,
                                  const MeasureSpec& spec) {
    std::vector<int> sites(region.begin(), region.end());
    std::sort(sites.begin(), sites.end());
    for (int site : sites)
        if (site < 0 || site >= state.sites)
            throw std::invalid_argument("measure_sites: site out of range");

    std::vector<Branch> branches;
    switch (spec.kind) {
    case MeasureSpec::Kind::enumerate_all: {
        if (sites.size() > 12)
            throw std::invalid_argument("measure_sites: enumerate mode limited to |C| <= 12");
        std::vector<int> outcomes(sites.size());
        for (std::uint64_t bits = 0; bits < (1ULL << sites.size()); ++bits) {
            for (std::size_t i = 0; i < sites.size(); ++i) outcomes[i] = (bits >> i) & 1ULL;
            Branch b = apply_pattern(state, sites, outcomes, true);
            if (b.probability < kNullThreshold) continue; // null branch skipped
            branches.push_back(std::move(b));
        }
        break;
    }
    case MeasureSpec::Kind::forced: {
        if (spec.pattern.size() != sites.size())
            throw std::invalid_argument("measure_sites: pattern size mismatch");
        branches.push_back(apply_pattern(state, sites, spec.pattern, false));
        break;
    }
    case MeasureSpec::Kind::sample: {
        // site-by-site Born sampling; log_prob accumulates conditionals
        Branch branch;
        branch.state.sites = state.sites;
        Eigen::VectorXcd amp = state.amplitudes;
        std::uint64_t rng = spec.seed;
        double log_prob = 0.0;
        for (int site : sites) {
            const double p1 = occupied_weight(amp, site);
            const int outcome = uniform_double(rng) < p1 ? 1 : 0;
            const double p = outcome == 1 ? p1 : 1.0 - p1;
            project_site(amp, site, outcome);
            amp /= std::sqrt(p);
            log_prob += std::log(p);
            branch.record.outcomes.emplace_back(site, outcome);
        }
        branch.record.log_prob = log_prob;
        branch.probability = std::exp(log_prob);
        branch.state.amplitudes = std::move(amp);
        branches.push_back(std::move(branch));
        break;
    }
    }
    return branches;
}

double region_entropy(const SpinState& state, std::span<const int> region, double n) {
    const int length = state.sites;
    std::vector<int> inside(region.begin(), region.end());
    std::sort(inside.begin(), inside.end());
    std::vector<int> outside;
    for (int j = 0; j < length; ++j)
        if (!std::binary_search(inside.begin(), inside.end(), j)) outside.push_back(j);

    const int r = static_cast<int>(inside.size());
    const int e = static_cast<int>(outside.size());
    // gather-bit reshape: psi(s) -> M(region bits, environment bits)
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(1 << r, 1 << e);
    for (int s = 0; s < state.amplitudes.size(); ++s) {
        const std::complex<double> a = state.amplitudes(s);
        if (a == std::complex<double>(0.0, 0.0)) continue;
        int ri = 0, ei = 0;
        for (int b = 0; b < r; ++b) ri |= ((s >> inside[b]) & 1) << b;
        for (int b = 0; b < e; ++b) ei |= ((s >> outside[b]) & 1) << b;
        mat(ri, ei) = a;
    }
    const Eigen::MatrixXcd rho = mat * mat.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);

    double acc = 0.0;
    if (std::abs(n - 1.0) < 1e-12) {
        for (int i = 0; i < solver.eigenvalues().size(); ++i) {
            const double lam = solver.eigenvalues()(i);
            if (lam > 1e-14) acc -= lam * std::log(lam);
        }
        return acc;
    }
    for (int i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lam = solver.eigenvalues()(i);
        if (lam > 1e-14) acc += std::pow(lam, n);
    }
    return std::log(acc) / (1.0 - n);
}

double mie_exact(int chain_length, const geom::AntipodalLayout& layout, double delta,
                 double n) {
    if (layout.chain_length != chain_length)
        throw std::invalid_argument("mie_exact: layout does not match chain length");
    if (layout.measured.size() > 12)
        throw std::invalid_argument("mie_exact: |C| <= 12 required for enumeration");
    const SpinState ground = xxz_ground_state(chain_length, delta);
    if (layout.measured.empty())
        return region_entropy(ground, layout.region_a, n);
    double acc = 0.0;
    for (const Branch& b :
         measure_sites(ground, layout.measured, MeasureSpec::enumerate_all()))
        acc += b.probability * region_entropy(b.state, layout.region_a, n);
    return acc;
}

} // namespace mie::ed
