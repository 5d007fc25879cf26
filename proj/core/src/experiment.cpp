#include "mie/experiment.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "mie/cft_mie.hpp"
#include "mie/ed_oracle.hpp"
#include "mie/gaussian_sim.hpp"

namespace mie::runner {

const char* const kVersion = "0.1.0";

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.6931471805599453;

std::string mode_name(Mode m) {
    switch (m) {
    case Mode::theory: return "theory";
    case Mode::xx_mc: return "xx_mc";
    case Mode::ed: return "ed";
    case Mode::forced: return "forced";
    }
    return "?";
}

Mode mode_from(const std::string& s) {
    if (s == "theory") return Mode::theory;
    if (s == "xx_mc") return Mode::xx_mc;
    if (s == "ed") return Mode::ed;
    if (s == "forced") return Mode::forced;
    throw ConfigError("unknown mode: " + s);
}

} // namespace

std::vector<double> ZetaGrid::values() const {
    if (points < 1) throw ConfigError("zeta_grid: points must be >= 1");
    if (!(min > 0.0 && max < 1.0 && min <= max))
        throw ConfigError("zeta_grid: need 0 < min <= max < 1");
    std::vector<double> zs;
    zs.reserve(points);
    if (points == 1) {
        zs.push_back(min);
        return zs;
    }
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        zs.push_back(log_spacing ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                                 : min + t * (max - min));
    }
    return zs;
}

double ExperimentConfig::luttinger() const {
    if (g) return *g;
    return ed::luttinger_g(delta);
}

void ExperimentConfig::validate() const {
    for (double n : renyi_list)
        if (!(n > 0.0)) throw ConfigError("renyi_list entries must be positive");
    if (renyi_list.empty() && mode != Mode::theory)
        throw ConfigError("renyi_list must not be empty");
    if (output_path.empty()) throw ConfigError("output_path is required");
    switch (mode) {
    case Mode::theory:
        if (!zeta_grid) throw ConfigError("theory mode requires zeta_grid");
        if (renyi_list.empty()) throw ConfigError("renyi_list must not be empty");
        break;
    case Mode::xx_mc:
        if (!layout_sweep) throw ConfigError("xx_mc mode requires layout_sweep");
        if (chain_length < 8 || chain_length % 2)
            throw ConfigError("xx_mc mode requires even L >= 8");
        if (n_traj < 1) throw ConfigError("xx_mc mode requires n_traj >= 1");
        if (delta != 0.0) throw ConfigError("the Gaussian engine is exact only at Delta = 0");
        break;
    case Mode::ed:
        if (!layout_sweep) throw ConfigError("ed mode requires layout_sweep");
        if (chain_length < 4 || chain_length > 14 || chain_length % 2)
            throw ConfigError("ed mode requires even L <= 14");
        if (layout_sweep->max_measured * 2 > 12)
            throw ConfigError("ed mode requires |C| <= 12 (max_measured <= 6)");
        break;
    case Mode::forced:
        if (!layout_sweep) throw ConfigError("forced mode requires layout_sweep");
        if (chain_length < 8 || chain_length % 2)
            throw ConfigError("forced mode requires even L >= 8");
        if (delta != 0.0) throw ConfigError("forced numerics run at Delta = 0");
        break;
    }
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

std::vector<geom::AntipodalLayout> generate_layout_sweep(int chain_length,
                                                         int min_measured,
                                                         int max_measured, int step) {
    if (chain_length % 2 != 0)
        throw std::invalid_argument("generate_layout_sweep: L must be even");
    if (step < 1) throw std::invalid_argument("generate_layout_sweep: step must be >= 1");
    if (min_measured > max_measured)
        throw std::invalid_argument("generate_layout_sweep: min > max");
    std::vector<geom::AntipodalLayout> sweep;
    for (int c = min_measured; c <= max_measured; c += step)
        sweep.push_back(geom::antipodal_layout(chain_length, c));
    return sweep;
}

std::string default_config_template() {
    return R"({
  // experiment mode: theory | xx_mc | ed | forced
  "mode": "theory",

  // chain length (simulation modes; xx_mc needs even L >= 8, ed needs L <= 14)
  "L": 256,

  // XXZ anisotropy; sets the Luttinger parameter through Delta = -cos(pi g).
  // The Gaussian Monte Carlo engine requires Delta = 0 (the XX chain).
  "delta": 0.0,

  // optional: set g directly for theory/forced curves instead of delta
  // "g": 0.5,

  // Renyi indices; n = 1 is the von Neumann entropy
  "renyi_list": [0.5, 1.0, 2.0, 3.0],

  // cross-ratio grid (theory mode)
  "zeta_grid": { "min": 1e-3, "max": 0.97, "points": 40, "spacing": "log" },

  // antipodal layout sweep (simulation modes): |C1| = |C2| = c swept
  // from min_measured to max_measured in the given step
  "layout_sweep": { "min_measured": 8, "max_measured": 120, "step": 8 },

  // Born-rule trajectories per layout (xx_mc)
  "n_traj": 4000,

  // 64-bit RNG seed; identical config + seed reproduces the output bit-exactly
  "seed": 12345,

  "output_path": "mie_run.csv",

  // nats | bits
  "units": "nats",

  "threads": 1
}
)";
}

ExperimentConfig parse_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& err) {
        throw ConfigError(std::string("config parse error: ") + err.what());
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("mode")) cfg.mode = mode_from(j["mode"].get<std::string>());
        if (j.contains("L")) cfg.chain_length = j["L"].get<int>();
        if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
        if (j.contains("g")) cfg.g = j["g"].get<double>();
        if (j.contains("renyi_list")) cfg.renyi_list = j["renyi_list"].get<std::vector<double>>();
        if (j.contains("zeta_grid")) {
            const auto& z = j["zeta_grid"];
            ZetaGrid grid;
            if (z.contains("min")) grid.min = z["min"].get<double>();
            if (z.contains("max")) grid.max = z["max"].get<double>();
            if (z.contains("points")) grid.points = z["points"].get<int>();
            if (z.contains("spacing")) grid.log_spacing = z["spacing"].get<std::string>() != "linear";
            cfg.zeta_grid = grid;
        }
        if (j.contains("layout_sweep")) {
            const auto& l = j["layout_sweep"];
            LayoutSweep sweep;
            if (l.contains("min_measured")) sweep.min_measured = l["min_measured"].get<int>();
            if (l.contains("max_measured")) sweep.max_measured = l["max_measured"].get<int>();
            if (l.contains("step")) sweep.step = l["step"].get<int>();
            cfg.layout_sweep = sweep;
        }
        if (j.contains("n_traj")) cfg.n_traj = j["n_traj"].get<long>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();
        if (j.contains("units")) {
            const std::string u = j["units"].get<std::string>();
            if (u == "nats") cfg.units = Units::nats;
            else if (u == "bits") cfg.units = Units::bits;
            else throw ConfigError("units must be nats or bits");
        }
        if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    } catch (const nlohmann::json::exception& err) {
        throw ConfigError(std::string("config field error: ") + err.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["mode"] = mode_name(c.mode);
    j["L"] = c.chain_length;
    j["delta"] = c.delta;
    if (c.g) j["g"] = *c.g;
    j["renyi_list"] = c.renyi_list;
    if (c.zeta_grid)
        j["zeta_grid"] = {{"min", c.zeta_grid->min},
                          {"max", c.zeta_grid->max},
                          {"points", c.zeta_grid->points},
                          {"spacing", c.zeta_grid->log_spacing ? "log" : "linear"}};
    if (c.layout_sweep)
        j["layout_sweep"] = {{"min_measured", c.layout_sweep->min_measured},
                             {"max_measured", c.layout_sweep->max_measured},
                             {"step", c.layout_sweep->step}};
    j["n_traj"] = c.n_traj;
    j["seed"] = c.seed;
    j["output_path"] = c.output_path;
    j["units"] = c.units == Units::nats ? "nats" : "bits";
    j["threads"] = c.threads;
    return j.dump(2);
}

namespace {

double theory_value(double n, double zeta, double g) {
    if (std::abs(n - 1.0) < 1e-12) return cft::mie_von_neumann(zeta, g);
    return cft::mie_renyi(cft::TheoryParams(g, n, zeta));
}

std::vector<ResultRow> execute_theory(const ExperimentConfig& cfg) {
    const double g = cfg.luttinger();
    const double delta = cfg.g ? -std::cos(kPi * g) : cfg.delta;
    std::vector<ResultRow> rows;
    for (double zeta : cfg.zeta_grid->values())
        for (double n : cfg.renyi_list)
            rows.push_back({zeta, n, theory_value(n, zeta, g), 0.0, "theory", 0, delta, g});
    return rows;
}

std::vector<ResultRow> execute_xx_mc(const ExperimentConfig& cfg) {
    const double g = 0.5; // XX chain
    const sim::CorrelationMatrix ground = sim::xx_ground_state(cfg.chain_length);
    std::vector<ResultRow> rows;
    for (const auto& layout :
         generate_layout_sweep(cfg.chain_length, cfg.layout_sweep->min_measured,
                               cfg.layout_sweep->max_measured, cfg.layout_sweep->step)) {
        const auto estimates = sim::estimate_mie_multi(ground, layout, cfg.renyi_list,
                                                       cfg.n_traj, cfg.seed, cfg.threads);
        for (const auto& est : estimates)
            rows.push_back({layout.zeta, est.renyi_n, est.mean, est.std_error, "mc",
                            cfg.chain_length, 0.0, g});
    }
    return rows;
}

std::vector<ResultRow> execute_ed(const ExperimentConfig& cfg) {
    const double g = ed::luttinger_g(cfg.delta);
    std::vector<ResultRow> rows;
    for (const auto& layout :
         generate_layout_sweep(cfg.chain_length, cfg.layout_sweep->min_measured,
                               cfg.layout_sweep->max_measured, cfg.layout_sweep->step)) {
        for (double n : cfg.renyi_list)
            rows.push_back({layout.zeta, n, ed::mie_exact(cfg.chain_length, layout, cfg.delta, n),
                            0.0, "ed", cfg.chain_length, cfg.delta, g});
    }
    return rows;
}

std::vector<ResultRow> execute_forced(const ExperimentConfig& cfg) {
    // paired rows: closed-form forced curve + Neel-post-selected lattice value
    const double g = cfg.g ? *cfg.g : 0.5;
    const sim::CorrelationMatrix ground = sim::xx_ground_state(cfg.chain_length);
    std::vector<ResultRow> rows;
    for (const auto& layout :
         generate_layout_sweep(cfg.chain_length, cfg.layout_sweep->min_measured,
                               cfg.layout_sweep->max_measured, cfg.layout_sweep->step)) {
        for (double n : cfg.renyi_list) {
            const double theory = cft::mie_forced(cft::TheoryParams(g, n, layout.zeta));
            rows.push_back({layout.zeta, n, theory, 0.0, "theory_forced", 0,
                            -std::cos(kPi * g), g});
        }
        const auto lattice = sim::forced_mie(ground, layout, cfg.renyi_list);
        for (std::size_t i = 0; i < cfg.renyi_list.size(); ++i)
            rows.push_back({layout.zeta, cfg.renyi_list[i], lattice[i], 0.0, "forced_numeric",
                            cfg.chain_length, 0.0, 0.5});
    }
    return rows;
}

void convert_units(std::vector<ResultRow>& rows, Units units) {
    if (units == Units::nats) return;
    for (ResultRow& r : rows) {
        r.value /= kLn2;
        r.std_error /= kLn2;
    }
}

} // namespace

std::vector<ResultRow> execute(const ExperimentConfig& cfg) {
    cfg.validate();
    switch (cfg.mode) {
    case Mode::theory: return execute_theory(cfg);
    case Mode::xx_mc: return execute_xx_mc(cfg);
    case Mode::ed: return execute_ed(cfg);
    case Mode::forced: return execute_forced(cfg);
    }
    throw std::logic_error("execute: unreachable");
}

RunInfo run(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::string tmp = cfg.output_path + ".partial";
    RunInfo info;
    try {
        std::vector<ResultRow> rows = execute(cfg);
        convert_units(rows, cfg.units);
        write_dataset(tmp, rows);
        std::filesystem::rename(tmp, cfg.output_path);
        info.rows = rows.size();
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec); // partial output removed
        throw;
    }
    const auto t1 = std::chrono::steady_clock::now();
    info.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    info.dataset_path = cfg.output_path;
    info.manifest_path = cfg.output_path + ".manifest.json";

    nlohmann::json manifest;
    manifest["config"] = nlohmann::json::parse(to_json(cfg));
    manifest["seed"] = cfg.seed;
    manifest["wall_seconds"] = info.wall_seconds;
    manifest["version"] = kVersion;
    manifest["rows"] = info.rows;
    std::ofstream out(info.manifest_path);
    if (!out) throw std::runtime_error("run: cannot write manifest " + info.manifest_path);
    out << manifest.dump(2) << '\n';
    return info;
}

} // namespace mie::runner
