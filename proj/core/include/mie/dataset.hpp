#ifndef MIE_DATASET_HPP
#define MIE_DATASET_HPP

#include <span>
#include <string>
#include <vector>

namespace mie::runner {

/// One output record. `source` is one of
/// theory | theory_forced | mc | ed | forced_numeric.
struct ResultRow {
    double zeta = 0.0;
    double renyi_n = 1.0;
    double value = 0.0;
    double std_error = 0.0; // 0 for deterministic modes
    std::string source;
    int chain_length = 0; // 0 for pure theory rows
    double delta = 0.0;
    double g = 0.5;
};

/// Fixed header: zeta,renyi_n,value,stderr,source,L,delta,g
/// Numbers are printed with 17 significant digits (lossless round trip).
extern const char* const kDatasetHeader;

std::string format_dataset(std::span<const ResultRow> rows);
void write_dataset(const std::string& path, std::span<const ResultRow> rows);
std::vector<ResultRow> read_dataset(const std::string& path);

/// Comparison of a numeric dataset against a theory dataset with
/// overlapping zeta support: theory values are interpolated (linearly in
/// log zeta) onto the numeric points, z = (numeric - theory)/stderr.
struct ComparePoint {
    double zeta, renyi_n, numeric, theory, std_error, z;
};

struct SlopeFit {
    double renyi_n;
    std::string source;
    double slope;      // d log(value) / d log(zeta) on the small-zeta tail
    int points;
};

struct CompareSummary {
    std::vector<ComparePoint> points;
    double max_abs_z = 0.0;
    double fraction_within_2 = 0.0;
    std::vector<SlopeFit> slopes;
};

CompareSummary compare_datasets(std::span<const ResultRow> theory,
                                std::span<const ResultRow> numeric);
std::string compare_summary_json(const CompareSummary& summary);

/// Least-squares slope of log(value) vs log(zeta).
double log_log_slope(std::span<const double> zetas, std::span<const double> values);

} // namespace mie::runner

#endif
