#include "mie/dataset.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mie::runner {

const char* const kDatasetHeader = "zeta,renyi_n,value,stderr,source,L,delta,g";

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string format_dataset(std::span<const ResultRow> rows) {
    std::ostringstream out;
    out << kDatasetHeader << '\n';
    for (const ResultRow& r : rows) {
        out << fmt(r.zeta) << ',' << fmt(r.renyi_n) << ',' << fmt(r.value) << ','
            << fmt(r.std_error) << ',' << r.source << ',' << r.chain_length << ','
            << fmt(r.delta) << ',' << fmt(r.g) << '\n';
    }
    return out.str();
}

void write_dataset(const std::string& path, std::span<const ResultRow> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_dataset: cannot open " + path);
    out << format_dataset(rows);
    if (!out) throw std::runtime_error("write_dataset: write failed for " + path);
}

std::vector<ResultRow> read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_dataset: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kDatasetHeader)
        throw std::runtime_error("read_dataset: bad or missing header in " + path);
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        ResultRow r;
        std::string field;
        auto next = [&]() {
            if (!std::getline(ss, field, ',')) throw std::runtime_error("read_dataset: short row");
            return field;
        };
        r.zeta = std::stod(next());
        r.renyi_n = std::stod(next());
        r.value = std::stod(next());
        r.std_error = std::stod(next());
        r.source = next();
        r.chain_length = std::stoi(next());
        r.delta = std::stod(next());
        r.g = std::stod(next());
        rows.push_back(std::move(r));
    }
    return rows;
}

double log_log_slope(std::span<const double> zetas, std::span<const double> values) {
    if (zetas.size() != values.size() || zetas.size() < 2)
        throw std::invalid_argument("log_log_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double count = static_cast<double>(zetas.size());
    for (std::size_t i = 0; i < zetas.size(); ++i) {
        const double x = std::log(zetas[i]);
        const double y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

namespace {

// linear interpolation of value vs log(zeta) within a sorted table
double interp_log(const std::vector<std::pair<double, double>>& table, double zeta) {
    const double x = std::log(zeta);
    auto hi = std::lower_bound(table.begin(), table.end(), std::make_pair(x, -1e300));
    if (hi == table.begin()) return table.front().second;
    if (hi == table.end()) return table.back().second;
    const auto lo = hi - 1;
    const double t = (x - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

std::vector<SlopeFit> tail_slopes(std::span<const ResultRow> rows) {
    std::map<std::pair<std::string, double>, std::vector<const ResultRow*>> groups;
    for (const ResultRow& r : rows) groups[{r.source, r.renyi_n}].push_back(&r);
    std::vector<SlopeFit> fits;
    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end(),
                  [](const ResultRow* a, const ResultRow* b) { return a->zeta < b->zeta; });
        // smallest decade of zeta with positive values
        const double z_min = members.front()->zeta;
        std::vector<double> zs, vs;
        for (const ResultRow* r : members)
            if (r->zeta <= 10.0 * z_min && r->value > 0.0) {
                zs.push_back(r->zeta);
                vs.push_back(r->value);
            }
        if (zs.size() < 3) continue;
        fits.push_back({key.second, key.first, log_log_slope(zs, vs),
                        static_cast<int>(zs.size())});
    }
    return fits;
}

} // namespace

CompareSummary compare_datasets(std::span<const ResultRow> theory,
                                std::span<const ResultRow> numeric) {
    std::map<double, std::vector<std::pair<double, double>>> theory_by_n;
    for (const ResultRow& r : theory)
        theory_by_n[r.renyi_n].emplace_back(std::log(r.zeta), r.value);
    for (auto& [n, table] : theory_by_n) std::sort(table.begin(), table.end());

    CompareSummary summary;
    int within = 0;
    for (const ResultRow& r : numeric) {
        const auto it = theory_by_n.find(r.renyi_n);
        if (it == theory_by_n.end()) continue;
        const auto& table = it->second;
        const double lo = std::exp(table.front().first);
        const double hi = std::exp(table.back().first);
        if (r.zeta < lo * (1.0 - 1e-9) || r.zeta > hi * (1.0 + 1e-9)) continue;
        ComparePoint p;
        p.zeta = r.zeta;
        p.renyi_n = r.renyi_n;
        p.numeric = r.value;
        p.theory = interp_log(table, r.zeta);
        p.std_error = r.std_error;
        const double diff = p.numeric - p.theory;
        p.z = diff == 0.0 ? 0.0 : diff / (p.std_error > 0.0 ? p.std_error
                                          : std::numeric_limits<double>::min());
        summary.max_abs_z = std::max(summary.max_abs_z, std::abs(p.z));
        if (std::abs(p.z) <= 2.0) ++within;
        summary.points.push_back(p);
    }
    if (summary.points.empty())
        throw std::runtime_error("compare_datasets: no overlapping zeta support");
    summary.fraction_within_2 =
        static_cast<double>(within) / static_cast<double>(summary.points.size());

    auto fits = tail_slopes(theory);
    const auto numeric_fits = tail_slopes(numeric);
    fits.insert(fits.end(), numeric_fits.begin(), numeric_fits.end());
    summary.slopes = std::move(fits);
    return summary;
}

std::string compare_summary_json(const CompareSummary& s) {
    nlohmann::json j;
    j["max_abs_z"] = s.max_abs_z;
    j["fraction_within_2"] = s.fraction_within_2;
    j["n_points"] = s.points.size();
    j["points"] = nlohmann::json::array();
    for (const ComparePoint& p : s.points)
        j["points"].push_back({{"zeta", p.zeta},
                               {"renyi_n", p.renyi_n},
                               {"numeric", p.numeric},
                               {"theory", p.theory},
                               {"stderr", p.std_error},
                               {"z", p.z}});
    j["tail_slopes"] = nlohmann::json::array();
    for (const SlopeFit& f : s.slopes)
        j["tail_slopes"].push_back({{"renyi_n", f.renyi_n},
                                    {"source", f.source},
                                    {"slope", f.slope},
                                    {"points", f.points}});
    return j.dump(2);
}

} // namespace mie::runner
