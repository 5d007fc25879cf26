// Command-line driver: evaluates the closed-form MIE curves, runs the
// Born-sampling / exact-diagonalization simulators over antipodal layout
// sweeps, and compares datasets. Exit codes: 0 success, 1 usage error,
// 2 runtime error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mie/dataset.hpp"
#include "mie/experiment.hpp"

namespace {

using mie::runner::ExperimentConfig;
using mie::runner::Mode;
using mie::runner::Units;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<int> threads;
    std::string units;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file (flags override it)");
    cmd->add_option("--seed", flags.seed, "64-bit RNG seed");
    cmd->add_option("--out", flags.out, "output dataset path");
    cmd->add_option("--threads", flags.threads, "trajectory worker threads");
    cmd->add_option("--units", flags.units, "nats | bits")
        ->check(CLI::IsMember({"nats", "bits"}));
}

ExperimentConfig base_config(const CommonFlags& flags) {
    ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = mie::runner::load_config(flags.config_path);
    if (flags.seed) cfg.seed = *flags.seed;
    if (!flags.out.empty()) cfg.output_path = flags.out;
    if (flags.threads) cfg.threads = *flags.threads;
    if (flags.units == "bits") cfg.units = Units::bits;
    else if (flags.units == "nats") cfg.units = Units::nats;
    return cfg;
}

int do_run(const ExperimentConfig& cfg) {
    const auto info = mie::runner::run(cfg);
    std::printf("wrote %zu rows to %s (%.2f s); manifest %s\n", info.rows,
                info.dataset_path.c_str(), info.wall_seconds, info.manifest_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"measurement-induced entanglement in Luttinger liquids: "
                 "exact curves and lattice verification"};
    app.require_subcommand(0, 1);

    bool emit_template = false;
    app.add_flag("--emit-default-config", emit_template,
                 "print a commented config template and exit");

    // ---- theory ----
    CommonFlags theory_flags;
    double theory_g = 0.5;
    bool theory_g_set = false;
    double theory_delta = 0.0;
    bool theory_delta_set = false;
    std::vector<double> theory_renyi;
    double zmin = 1e-3, zmax = 0.97;
    int zpoints = 40;
    bool zlinear = false;
    auto* theory = app.add_subcommand("theory", "evaluate the closed-form MIE curves");
    add_common(theory, theory_flags);
    theory->add_option("--g", theory_g, "Luttinger parameter")->each([&](const std::string&) {
        theory_g_set = true;
    });
    theory->add_option("--delta", theory_delta, "XXZ anisotropy (sets g)")
        ->each([&](const std::string&) { theory_delta_set = true; });
    theory->add_option("--renyi", theory_renyi, "Renyi indices");
    theory->add_option("--zeta-min", zmin, "smallest cross ratio");
    theory->add_option("--zeta-max", zmax, "largest cross ratio");
    theory->add_option("--zeta-points", zpoints, "grid size");
    theory->add_flag("--linear", zlinear, "linear instead of log spacing");

    // ---- simulate ----
    CommonFlags sim_flags;
    std::string sim_mode;
    int sim_length = 0;
    double sim_delta = 0.0;
    bool sim_delta_set = false;
    std::vector<double> sim_renyi;
    long sim_traj = 0;
    int sweep_min = 0, sweep_max = 0, sweep_step = 1;
    bool sweep_set = false;
    auto* simulate = app.add_subcommand(
        "simulate", "Born-rule Monte Carlo (xx_mc) or exact enumeration (ed)");
    add_common(simulate, sim_flags);
    simulate->add_option("--mode", sim_mode, "xx_mc | ed")
        ->check(CLI::IsMember({"xx_mc", "ed"}));
    simulate->add_option("--L", sim_length, "chain length");
    simulate->add_option("--delta", sim_delta, "XXZ anisotropy (ed mode)")
        ->each([&](const std::string&) { sim_delta_set = true; });
    simulate->add_option("--renyi", sim_renyi, "Renyi indices");
    simulate->add_option("--n-traj", sim_traj, "trajectories per layout");
    auto* smin = simulate->add_option("--min-measured", sweep_min, "smallest |C1|");
    simulate->add_option("--max-measured", sweep_max, "largest |C1|");
    simulate->add_option("--step", sweep_step, "sweep step");
    smin->each([&](const std::string&) { sweep_set = true; });

    // ---- forced ----
    CommonFlags forced_flags;
    int forced_length = 0;
    double forced_g = 0.5;
    bool forced_g_set = false;
    std::vector<double> forced_renyi;
    int fmin = 0, fmax = 0, fstep = 1;
    bool fsweep_set = false;
    auto* forced = app.add_subcommand(
        "forced", "Neel-post-selected lattice values paired with the forced curve");
    add_common(forced, forced_flags);
    forced->add_option("--L", forced_length, "chain length");
    forced->add_option("--g", forced_g, "Luttinger parameter for the curve")
        ->each([&](const std::string&) { forced_g_set = true; });
    forced->add_option("--renyi", forced_renyi, "Renyi indices");
    auto* fminopt = forced->add_option("--min-measured", fmin, "smallest |C1|");
    forced->add_option("--max-measured", fmax, "largest |C1|");
    forced->add_option("--step", fstep, "sweep step");
    fminopt->each([&](const std::string&) { fsweep_set = true; });

    // ---- sweep ----
    int sweep_length = 0;
    int lmin = 1, lmax = 0, lstep = 1;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "print the antipodal layout table");
    sweep->add_option("--L", sweep_length, "chain length")->required();
    sweep->add_option("--min-measured", lmin, "smallest |C1|");
    sweep->add_option("--max-measured", lmax, "largest |C1|")->required();
    sweep->add_option("--step", lstep, "sweep step");
    sweep->add_option("--out", sweep_out, "write the table here instead of stdout");

    // ---- compare ----
    std::string cmp_theory, cmp_numeric, cmp_out;
    auto* compare = app.add_subcommand("compare", "z-scores and tail slopes of two datasets");
    compare->add_option("--theory", cmp_theory, "theory dataset")->required();
    compare->add_option("--numeric", cmp_numeric, "numeric dataset")->required();
    compare->add_option("--out", cmp_out, "write the JSON summary here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints message/help
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (emit_template) {
            std::fputs(mie::runner::default_config_template().c_str(), stdout);
            return 0;
        }
        if (theory->parsed()) {
            ExperimentConfig cfg = base_config(theory_flags);
            cfg.mode = Mode::theory;
            if (theory_delta_set) cfg.delta = theory_delta;
            if (theory_g_set) cfg.g = theory_g;
            else if (!theory_delta_set && !cfg.g && cfg.delta == 0.0) cfg.g = theory_g;
            if (!theory_renyi.empty()) cfg.renyi_list = theory_renyi;
            if (!cfg.zeta_grid || theory->count("--zeta-min") || theory->count("--zeta-max") ||
                theory->count("--zeta-points") || zlinear) {
                mie::runner::ZetaGrid grid;
                if (cfg.zeta_grid) grid = *cfg.zeta_grid;
                if (theory->count("--zeta-min")) grid.min = zmin;
                if (theory->count("--zeta-max")) grid.max = zmax;
                if (theory->count("--zeta-points")) grid.points = zpoints;
                if (zlinear) grid.log_spacing = false;
                cfg.zeta_grid = grid;
            }
            return do_run(cfg);
        }
        if (simulate->parsed()) {
            ExperimentConfig cfg = base_config(sim_flags);
            if (!sim_mode.empty()) cfg.mode = sim_mode == "ed" ? Mode::ed : Mode::xx_mc;
            else if (cfg.mode != Mode::ed) cfg.mode = Mode::xx_mc;
            if (sim_length) cfg.chain_length = sim_length;
            if (sim_delta_set) cfg.delta = sim_delta;
            if (!sim_renyi.empty()) cfg.renyi_list = sim_renyi;
            if (sim_traj) cfg.n_traj = sim_traj;
            if (sweep_set || !cfg.layout_sweep)
                cfg.layout_sweep = mie::runner::LayoutSweep{sweep_min, sweep_max, sweep_step};
            return do_run(cfg);
        }
        if (forced->parsed()) {
            ExperimentConfig cfg = base_config(forced_flags);
            cfg.mode = Mode::forced;
            if (forced_length) cfg.chain_length = forced_length;
            if (forced_g_set) cfg.g = forced_g;
            if (!forced_renyi.empty()) cfg.renyi_list = forced_renyi;
            if (fsweep_set || !cfg.layout_sweep)
                cfg.layout_sweep = mie::runner::LayoutSweep{fmin, fmax, fstep};
            return do_run(cfg);
        }
        if (sweep->parsed()) {
            std::string table = "measured_len,block_len,zeta\n";
            for (const auto& lay :
                 mie::runner::generate_layout_sweep(sweep_length, lmin, lmax, lstep)) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", lay.measured_len,
                              lay.block_len, lay.zeta);
                table += buf;
            }
            if (sweep_out.empty()) {
                std::fputs(table.c_str(), stdout);
            } else {
                std::ofstream out(sweep_out, std::ios::binary);
                if (!out) throw std::runtime_error("cannot open " + sweep_out);
                out << table;
            }
            return 0;
        }
        if (compare->parsed()) {
            const auto theory_rows = mie::runner::read_dataset(cmp_theory);
            const auto numeric_rows = mie::runner::read_dataset(cmp_numeric);
            const auto summary = mie::runner::compare_datasets(theory_rows, numeric_rows);
            const std::string json = mie::runner::compare_summary_json(summary);
            if (cmp_out.empty()) {
                std::puts(json.c_str());
            } else {
                std::ofstream out(cmp_out, std::ios::binary);
                if (!out) throw std::runtime_error("cannot open " + cmp_out);
                out << json << '\n';
            }
            return 0;
        }
        std::fputs(app.help().c_str(), stdout);
        return 0;
    } catch (const mie::runner::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
