#ifndef MIE_EXPERIMENT_HPP
#define MIE_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mie/dataset.hpp"
#include "mie/geometry.hpp"

namespace mie::runner {

enum class Mode { theory, xx_mc, ed, forced };
enum class Units { nats, bits };

struct ZetaGrid {
    double min = 1e-3;
    double max = 0.97;
    int points = 40;
    bool log_spacing = true; // asymptotics need decades of zeta
    std::vector<double> values() const;
};

struct LayoutSweep {
    int min_measured = 1;
    int max_measured = 1;
    int step = 1;
};

/// Thrown on malformed configs; the CLI maps it to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Mode mode = Mode::theory;
    int chain_length = 0;
    double delta = 0.0;
    std::optional<double> g; // overrides the Delta -> g map for theory modes
    std::vector<double> renyi_list;
    std::optional<ZetaGrid> zeta_grid;
    std::optional<LayoutSweep> layout_sweep;
    long n_traj = 0;
    std::uint64_t seed = 0;
    std::string output_path;
    Units units = Units::nats;
    int threads = 1;

    double luttinger() const; // g override, else arccos(-Delta)/pi
    void validate() const;    // throws ConfigError
};

/// Antipodal layouts with |C1| = |C2| = c swept over
/// c = min_measured, min+step, ..., max_measured; attached zeta values are
/// strictly monotone (decreasing) across the sweep.
std::vector<geom::AntipodalLayout> generate_layout_sweep(int chain_length,
                                                         int min_measured,
                                                         int max_measured, int step);

/// Commented JSONC template accepted by parse_config.
std::string default_config_template();
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

std::string to_json(const ExperimentConfig& config);

/// Compute the rows for a config (always in nats; unit conversion happens
/// at write time).
std::vector<ResultRow> execute(const ExperimentConfig& config);

struct RunInfo {
    std::string dataset_path;
    std::string manifest_path;
    double wall_seconds = 0.0;
    std::size_t rows = 0;
};

/// Execute and write dataset + manifest. Any failure removes partial output.
RunInfo run(const ExperimentConfig& config);

extern const char* const kVersion;

} // namespace mie::runner

#endif
