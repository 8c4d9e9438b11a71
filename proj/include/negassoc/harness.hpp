#pragma once

// Seeded Monte Carlo engine, concentration-bound checks and the
// config-driven experiment runner behind the command-line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "negassoc/io.hpp"
#include "negassoc/ordering.hpp"
#include "negassoc/pointproc.hpp"

namespace negassoc {

/// Draws per-cell count vectors from a mixed or determinantal model.
class ProcessSampler {
public:
    explicit ProcessSampler(const ProcessModel& p);
    std::vector<int> operator()(Stream& stream) const;
    std::size_t cells() const { return cells_; }

private:
    std::variant<MixedSampler, DppSampler> sampler_;
    std::size_t cells_ = 0;
};

struct McEstimate {
    double estimate = 0.0;
    double se = 0.0;
    std::pair<double, double> ci_normal{0.0, 0.0};
    /// Only for indicator functionals.
    std::optional<std::pair<double, double>> ci_wilson;
    double z = 4.0;
    std::size_t replications = 0;
    std::uint64_t seed = 0;

    /// Wilson upper bound when available, normal otherwise.
    double ci_upper() const { return ci_wilson ? ci_wilson->second : ci_normal.second; }
};

/// P(all listed cells are empty).
struct VoidFunctional {
    std::vector<std::size_t> cells;
};

/// E count of one cell.
struct CountMeanFunctional {
    std::size_t cell = 0;
};

/// Indicator of max_{start <= k <= n} |b_k^{-1} sum_{i<=k} (N_i - mean_i)| >= eps
/// with k counted from 1 over the listed cells.
struct MaxPartialSumFunctional {
    std::vector<std::size_t> cells;
    std::vector<double> b;
    std::vector<double> means;
    double eps = 1.0;
    std::size_t start = 1;
};

using McFunctional = std::variant<VoidFunctional, CountMeanFunctional, MaxPartialSumFunctional>;

struct McOptions {
    std::size_t replications = 10'000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double z = 4.0;
};

inline constexpr std::size_t kMinReplications = 100;
inline constexpr std::size_t kMaxReplications = 100'000'000;

/// Replication r draws from Stream(seed, r); the reduction runs in index
/// order, so the result does not depend on the thread count.
McEstimate mc_estimate(const ProcessModel& p, const McFunctional& f, const McOptions& opts);

/// Exact value of a functional under a count law.
double exact_functional(const CountVectorLaw& law, const McFunctional& f);

/// P(|N - mean| >= eps) <= Var / eps^2 on one cell.
BoundReport chebyshev_bound(const CountVectorLaw& law, std::size_t cell, double eps,
                            double tol = kBoundTolerance);

struct ChernoffReports {
    BoundReport upper;  // P(N - mean >= eps) <= e^{-t(mean+eps)} E e^{tN}
    BoundReport lower;  // P(mean - N >= eps) <= e^{t(mean-eps)} E e^{-tN}
};

ChernoffReports chernoff_bound(const CountVectorLaw& law, std::size_t cell, double eps, double t,
                               double tol = kBoundTolerance);

std::vector<double> default_chernoff_grid();

struct KolmogorovOptions {
    std::vector<std::size_t> cells;
    std::vector<double> b;
    double eps = 1.0;
    /// Start index of the second form (1 <= m < n); unset selects the first.
    std::optional<std::size_t> m;
    McOptions mc;
    double tol = kBoundTolerance;
};

struct KolmogorovReport {
    BoundReport report;
    McEstimate estimate;
    /// Exact tail probability when the count law is available.
    std::optional<double> exact_lhs;
    std::string evidence = "monte-carlo";
};

/// lhs is the Monte Carlo tail estimate; holds iff its upper confidence
/// bound stays below the bound built from exact per-cell variances.
KolmogorovReport kolmogorov_bound_check(const ProcessModel& p, const KolmogorovOptions& opts);

// ---------------------------------------------------------------------------
// Experiments

inline constexpr const char* kConfigSchema = "negassoc.experiment/1";
inline constexpr const char* kReportSchema = "negassoc.report/1";

enum class OutputFormat { json, csv, both };

struct ExperimentConfig {
    std::string scenario;
    std::optional<ProcessSpec> process;
    std::optional<TruncatedPmf> tau;
    std::uint64_t seed = 0;
    std::size_t replications = 10'000;
    unsigned threads = 1;

    struct Tolerances {
        double covariance = 1e-10;
        double bound = kBoundTolerance;
        double rayleigh = 1e-10;
        double mass_floor = kDefaultMassFloor;
    } tolerances;

    struct Caps {
        EnumerationCaps enumeration;
        std::size_t points_per_pair = 10'000;
        std::size_t lines = 1'000;
    } caps;

    struct Concentration {
        std::vector<std::size_t> cells;  // empty: every cell
        std::vector<double> epsilons{1.0};
        std::vector<double> ts;          // empty: default grid
        std::optional<KolmogorovOptions> kolmogorov;
    } concentration;

    struct Output {
        std::string dir;  // empty: standard output
        OutputFormat format = OutputFormat::json;
    } output;

    /// Canonical echo of the parsed document.
    Json source;
};

/// Scenarios: ulc-check, rayleigh-check, sr-check, na-check, sna-check,
/// polarize, count-law, domination, concentration, sample.
const std::vector<std::string>& scenario_names();

ExperimentConfig parse_config(const Json& j, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

struct ReportRow {
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    std::string status;
    /// Replications for Monte Carlo rows, 0 for exact computations.
    std::size_t n = 0;

    bool passed() const { return status != "violated"; }
};

struct Report {
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;
    Json details = Json::object();
    Json config;

    bool all_hold() const;
    /// 0 when every row holds, 1 otherwise.
    int exit_status() const { return all_hold() ? 0 : 1; }
};

Report run(const ExperimentConfig& config);

std::string report_json_text(const Report& r);
std::string report_csv_text(const Report& r);
/// Writes report.json and/or summary.csv into dir, creating it if needed.
void write_report(const Report& r, const std::string& dir, OutputFormat format);

OutputFormat parse_output_format(const std::string& s);

}  // namespace negassoc
