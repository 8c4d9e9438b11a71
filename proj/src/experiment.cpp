#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "negassoc/error.hpp"
#include "negassoc/harness.hpp"
#include "negassoc/numeric.hpp"

namespace negassoc {
namespace {

constexpr std::size_t kMaxPointsPerPair = 10'000'000;
constexpr std::size_t kMaxLines = 1'000'000;

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string cells_label(const std::vector<std::size_t>& cells) {
    std::string out;
    for (std::size_t c : cells) {
        if (!out.empty()) out += '+';
        out += std::to_string(c);
    }
    return out;
}

std::vector<std::size_t> as_cells(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    for (double x : v) out.push_back(static_cast<std::size_t>(x));
    return out;
}

std::vector<std::size_t> cell_list(JsonFields& f, const std::string& key) {
    const Json& j = f.required(key);
    if (!j.is_array()) parse_fail(f.path_of(key), "expected an array of cell indices");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const long long c = as_integer(j[i], f.path_of(key) + "[" + std::to_string(i) + "]");
        if (c < 0) parse_fail(f.path_of(key), "cell indices are non-negative");
        out.push_back(static_cast<std::size_t>(c));
    }
    return out;
}

std::vector<double> positive_list(JsonFields& f, const std::string& key) {
    std::vector<double> v = f.numbers(key);
    if (v.empty()) parse_fail(f.path_of(key), "expected at least one value");
    for (double x : v)
        if (!(x > 0.0) || !std::isfinite(x)) parse_fail(f.path_of(key), "values must be positive");
    return v;
}

double positive_or(JsonFields& f, const std::string& key, double fallback) {
    const double v = f.number_or(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) parse_fail(f.path_of(key), "must be positive");
    return v;
}

std::size_t bounded_count(JsonFields& f, const std::string& key, std::size_t fallback, std::size_t lo,
                          std::size_t hi) {
    const long long v = f.integer_or(key, static_cast<long long>(fallback));
    if (v < static_cast<long long>(lo) || v > static_cast<long long>(hi))
        parse_fail(f.path_of(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<std::size_t>(v);
}

bool scenario_uses_tau(const std::string& s) { return s == "ulc-check" || s == "polarize"; }

// Which process types each scenario accepts.
bool accepts(const std::string& scenario, ProcessSpec::Type t) {
    using T = ProcessSpec::Type;
    if (scenario_uses_tau(scenario)) return t == T::mixed;
    if (scenario == "rayleigh-check" || scenario == "sr-check") return t != T::law;
    if (scenario == "domination") return t != T::measure;
    if (scenario == "sample") return t == T::mixed || t == T::dpp;
    return true;
}

Pmf resolve_tau(const ExperimentConfig& c) {
    if (c.tau) return c.tau->pmf;
    return c.process->mixed->tau;
}

CountVectorLaw law_of(const ProcessSpec& spec) {
    switch (spec.type) {
        case ProcessSpec::Type::measure: return {subset_indicator_law(*spec.measure), 1.0};
        case ProcessSpec::Type::law: return {*spec.law, 1.0};
        default: return count_law(spec.model());
    }
}

SubsetMeasure measure_of(const ProcessSpec& spec) {
    switch (spec.type) {
        case ProcessSpec::Type::measure: return *spec.measure;
        case ProcessSpec::Type::mixed: return polarize(spec.mixed->tau);
        case ProcessSpec::Type::dpp: return dpp_exact_law(*spec.dpp).law;
        default: fail(ErrorKind::precondition, "a subset measure needs a measure, mixed or dpp process");
    }
}

ReportRow row_from(const BoundReport& r, std::string check, std::size_t n = 0) {
    return {std::move(check), r.lhs, r.rhs, r.slack, r.holds() ? "holds" : "violated", n};
}

ReportRow status_row(std::string check, double lhs, double rhs, bool holds, std::size_t n = 0) {
    return {std::move(check), lhs, rhs, rhs - lhs, holds ? "holds" : "violated", n};
}

// max_k r_{k-1} r_{k+1} / r_k^2 with r_k = p_k / w_k over the support.
double worst_ratio(const Pmf& p, bool ulc) {
    const int n = p.bound();
    auto w = [&](int k) { return ulc ? binomial_coefficient(n, k) : 1.0; };
    int lo = 0, hi = n;
    while (lo <= n && p[lo] == 0.0) ++lo;
    while (hi >= 0 && p[hi] == 0.0) --hi;
    double worst = 0.0;
    for (int k = lo + 1; k < hi; ++k) {
        const double rk = p[k] / w(k);
        if (rk == 0.0) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, (p[k - 1] / w(k - 1)) * (p[k + 1] / w(k + 1)) / (rk * rk));
    }
    return worst;
}

Json rootedness_json(const RootednessResult& r) {
    return Json{{"real_rooted", r.real_rooted}, {"ambiguous", r.ambiguous}, {"degree", r.degree},
                {"distinct_real_roots", r.distinct_real}, {"distinct_roots", r.distinct_total}};
}

void run_ulc(const ExperimentConfig& c, Report& out) {
    const Pmf tau = resolve_tau(c);
    const SequenceCheck ulc = is_ulc(tau);
    const SequenceCheck pf2 = is_pf2(tau);
    out.rows.push_back(status_row("ulc", worst_ratio(tau, true), 1.0, ulc.holds));
    out.rows.push_back(status_row("pf2", worst_ratio(tau, false), 1.0, pf2.holds));
    out.details["tau"] = to_json(tau);
    out.details["ulc"] = to_json(ulc);
    out.details["pf2"] = to_json(pf2);
    out.details["generating_polynomial"] = rootedness_json(generating_polynomial_real_rootedness(tau));
}

void run_polarize(const ExperimentConfig& c, Report& out) {
    const Pmf tau = resolve_tau(c);
    const SubsetMeasure m = polarize(tau);
    const std::vector<double> diag = diagonal_coefficients(m);
    double worst = 0.0;
    for (int k = 0; k <= tau.bound(); ++k)
        worst = std::max(worst, std::abs(diag[static_cast<std::size_t>(k)] - tau[k]));
    out.rows.push_back(status_row("diagonal_recovery", worst, c.tolerances.bound, worst <= c.tolerances.bound));
    out.details["tau"] = to_json(tau);
    out.details["measure"] = to_json(m);
}

void run_stability(const ExperimentConfig& c, Report& out, bool strong) {
    const SubsetMeasure m = measure_of(*c.process);
    StabilityOptions opts = strong ? StabilityOptions::strongly_rayleigh_defaults()
                                   : StabilityOptions::rayleigh_defaults();
    opts.points_per_pair = c.caps.points_per_pair;
    opts.lines = strong ? c.caps.lines : 0;
    opts.tol = c.tolerances.rayleigh;
    opts.seed = c.seed;
    const StabilityVerdict v = strong ? is_strongly_rayleigh(m, opts) : is_rayleigh(m, opts);
    double rhs = 0.0;
    if (v.pair_witness) rhs = v.pair_witness->verified_slack;
    if (v.line_witness)
        rhs = -static_cast<double>(v.line_witness->distinct_total - v.line_witness->distinct_real);
    out.rows.push_back({strong ? "strongly_rayleigh" : "rayleigh", 0.0, rhs, rhs, to_string(v.status),
                        v.grid_trials + v.line_trials});
    out.details["verdict"] = to_json(v);
    out.details["measure"] = to_json(m);
}

void run_dependence(const ExperimentConfig& c, Report& out, bool sequence) {
    const CountVectorLaw law = law_of(*c.process);
    DependenceOptions opts;
    opts.tol = c.tolerances.covariance;
    opts.caps = c.caps.enumeration;
    const DependenceVerdict v = sequence ? is_sna(law.law, opts) : is_na(law.law, opts);
    out.rows.push_back(status_row(sequence ? "sna" : "na", v.max_value, 0.0,
                                  v.status == DependenceVerdict::Status::holds));
    out.details["verdict"] = to_json(v);
    out.details["law"] = to_json(law);
}

void run_count_law(const ExperimentConfig& c, Report& out) {
    const CountVectorLaw law = law_of(*c.process);
    CompensatedSum<double> total;
    for (double p : law.law.probs()) total.add(p);
    const double defect = std::abs(total.value() - 1.0);
    out.rows.push_back(status_row("total_mass", defect, kSumTolerance, defect <= kSumTolerance));
    out.details["law"] = to_json(law);
    out.details["intensity"] = intensity(law);
}

void run_domination(const ExperimentConfig& c, Report& out) {
    const CountVectorLaw law = law_of(*c.process);
    const DominationReport r = poisson_domination_report(law, c.tolerances.mass_floor);
    for (const auto& cx : r.cx) {
        const double lhs = cx.result.witness || std::abs(cx.result.mean_gap) <= 1e-9
                               ? -cx.result.min_stop_loss_gap
                               : std::abs(cx.result.mean_gap);
        out.rows.push_back(status_row("cx[" + cells_label(cx.cells) + "]", lhs, 0.0, cx.result.holds));
    }
    for (const auto& v : r.void_bounds)
        out.rows.push_back(row_from(v, "void[" + cells_label(as_cells(v.context.at("cells"))) + "]"));
    out.rows.push_back(row_from(r.moment, "moment_factorization"));
    if (!r.laplace.empty()) {
        const auto worst = std::min_element(r.laplace.begin(), r.laplace.end(),
                                            [](const auto& a, const auto& b) { return a.slack < b.slack; });
        out.rows.push_back(row_from(*worst, "laplace_negative"));
    }
    out.details["domination"] = to_json(r);
}

std::vector<std::size_t> concentration_cells(const ExperimentConfig& c, std::size_t dim) {
    if (!c.concentration.cells.empty()) return c.concentration.cells;
    std::vector<std::size_t> all(dim);
    for (std::size_t i = 0; i < dim; ++i) all[i] = i;
    return all;
}

void run_concentration(const ExperimentConfig& c, Report& out) {
    const CountVectorLaw law = law_of(*c.process);
    const std::vector<double> ts = c.concentration.ts.empty() ? default_chernoff_grid() : c.concentration.ts;
    Json cheb = Json::array(), chern = Json::array();
    for (std::size_t cell : concentration_cells(c, law.law.dim())) {
        for (double eps : c.concentration.epsilons) {
            const std::string tag = "[cell=" + std::to_string(cell) + ";eps=" + short_number(eps) + "]";
            const BoundReport ch = chebyshev_bound(law, cell, eps, c.tolerances.bound);
            out.rows.push_back(row_from(ch, "chebyshev" + tag));
            cheb.push_back(to_json(ch));
            std::optional<BoundReport> upper, lower;
            for (double t : ts) {
                const ChernoffReports r = chernoff_bound(law, cell, eps, t, c.tolerances.bound);
                if (!upper || r.upper.slack < upper->slack) upper = r.upper;
                if (!lower || r.lower.slack < lower->slack) lower = r.lower;
                chern.push_back(to_json(r.upper));
                chern.push_back(to_json(r.lower));
            }
            out.rows.push_back(row_from(*upper, "chernoff_upper" + tag));
            out.rows.push_back(row_from(*lower, "chernoff_lower" + tag));
        }
    }
    out.details["evidence"] = "exact";
    out.details["chebyshev"] = cheb;
    out.details["chernoff"] = chern;
    if (c.concentration.kolmogorov) {
        if (c.process->type != ProcessSpec::Type::mixed && c.process->type != ProcessSpec::Type::dpp)
            fail(ErrorKind::precondition, "kolmogorov check needs a mixed or dpp process");
        KolmogorovOptions k = *c.concentration.kolmogorov;
        k.mc = McOptions{c.replications, c.seed, c.threads, k.mc.z};
        k.tol = c.tolerances.bound;
        const KolmogorovReport r = kolmogorov_bound_check(c.process->model(), k);
        out.rows.push_back(row_from(r.report, r.report.name, r.estimate.replications));
        Json kj = to_json(r.report);
        kj["evidence"] = r.evidence;
        kj["estimate"] = Json{{"estimate", r.estimate.estimate}, {"se", r.estimate.se},
                              {"ci_wilson", {r.estimate.ci_wilson->first, r.estimate.ci_wilson->second}},
                              {"z", r.estimate.z}, {"replications", r.estimate.replications},
                              {"seed", r.estimate.seed}};
        out.details["kolmogorov"] = kj;
    }
}

Json estimate_json(const McEstimate& e) {
    Json j{{"estimate", e.estimate}, {"se", e.se}, {"ci_normal", {e.ci_normal.first, e.ci_normal.second}}};
    if (e.ci_wilson) j["ci_wilson"] = {e.ci_wilson->first, e.ci_wilson->second};
    j["z"] = e.z;
    j["replications"] = e.replications;
    j["seed"] = e.seed;
    return j;
}

void run_sample(const ExperimentConfig& c, Report& out) {
    const ProcessModel model = c.process->model();
    std::optional<CountVectorLaw> exact;
    try {
        exact = count_law(model);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::guard_exceeded) throw;
    }
    const std::size_t cells = ProcessSampler(model).cells();
    std::vector<std::pair<std::string, McFunctional>> functionals;
    for (std::size_t i = 0; i < cells; ++i)
        functionals.emplace_back("count_mean[" + std::to_string(i) + "]", CountMeanFunctional{i});
    for (std::size_t i = 0; i < cells; ++i)
        functionals.emplace_back("void[" + std::to_string(i) + "]", VoidFunctional{{i}});

    const McOptions mc{c.replications, c.seed, c.threads, 4.0};
    Json estimates = Json::array();
    for (const auto& [name, f] : functionals) {
        const McEstimate e = mc_estimate(model, f, mc);
        Json ej = estimate_json(e);
        ej["functional"] = name;
        if (exact) {
            const double truth = exact_functional(*exact, f);
            const double gap = std::abs(e.estimate - truth);
            const double band = e.z * e.se;
            out.rows.push_back({name, gap, band, band - gap,
                                gap <= band + c.tolerances.bound ? "holds" : "violated", e.replications});
            ej["exact"] = truth;
        } else {
            out.rows.push_back({name, e.estimate, e.estimate, 0.0, "estimated", e.replications});
        }
        estimates.push_back(ej);
    }
    out.details["evidence"] = exact ? "monte-carlo+exact" : "monte-carlo";
    out.details["estimates"] = estimates;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"ulc-check", "rayleigh-check", "sr-check",      "na-check",
                                                "sna-check", "polarize",       "count-law",     "domination",
                                                "concentration", "sample"};
    return names;
}

OutputFormat parse_output_format(const std::string& s) {
    if (s == "json") return OutputFormat::json;
    if (s == "csv") return OutputFormat::csv;
    if (s == "both") return OutputFormat::both;
    fail(ErrorKind::parse, "format must be json, csv or both (got \"" + s + "\")");
}

ExperimentConfig parse_config(const Json& j, const std::string& source) {
    ExperimentConfig c;
    JsonFields f(j, source);
    if (f.string("schema") != kConfigSchema)
        parse_fail(f.path_of("schema"), std::string("expected \"") + kConfigSchema + "\"");
    c.scenario = f.string("scenario");
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), c.scenario) == names.end())
        parse_fail(f.path_of("scenario"), "unknown scenario \"" + c.scenario + "\"");

    const long long seed = f.integer("seed");
    if (seed < 0) parse_fail(f.path_of("seed"), "seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    c.replications = bounded_count(f, "replications", c.replications, 1, kMaxReplications);
    c.threads = static_cast<unsigned>(bounded_count(f, "threads", 1, 1, 64));

    if (const Json* t = f.optional("tau")) {
        if (!scenario_uses_tau(c.scenario))
            parse_fail(f.path_of("tau"), "only ulc-check and polarize take a bare tau");
        c.tau = tau_from_json(*t, f.path_of("tau"));
    }
    if (const Json* p = f.optional("process")) {
        c.process = process_spec_from_json(*p, f.path_of("process"));
        if (!accepts(c.scenario, c.process->type))
            parse_fail(f.path_of("process") + ".type", "process type not supported by " + c.scenario);
    }
    if (!c.tau && !c.process)
        parse_fail(source, scenario_uses_tau(c.scenario) ? "needs \"tau\" or a mixed \"process\""
                                                         : "needs a \"process\"");
    if (c.tau && c.process) parse_fail(source, "give either \"tau\" or \"process\", not both");

    if (const Json* t = f.optional("tolerances")) {
        JsonFields tf(*t, f.path_of("tolerances"));
        c.tolerances.covariance = positive_or(tf, "covariance", c.tolerances.covariance);
        c.tolerances.bound = positive_or(tf, "bound", c.tolerances.bound);
        c.tolerances.rayleigh = positive_or(tf, "rayleigh", c.tolerances.rayleigh);
        c.tolerances.mass_floor = tf.number_or("mass_floor", c.tolerances.mass_floor);
        if (!(c.tolerances.mass_floor > 0.0 && c.tolerances.mass_floor < 1.0))
            parse_fail(tf.path_of("mass_floor"), "must lie in (0, 1)");
        tf.reject_unknown();
    }
    if (const Json* t = f.optional("caps")) {
        JsonFields cf(*t, f.path_of("caps"));
        const EnumerationCaps defaults;
        c.caps.enumeration.max_points = bounded_count(cf, "max_points", defaults.max_points, 1, defaults.max_points);
        c.caps.enumeration.max_up_sets =
            bounded_count(cf, "max_up_sets", defaults.max_up_sets, 1, defaults.max_up_sets);
        c.caps.points_per_pair = bounded_count(cf, "grid_points_per_pair", c.caps.points_per_pair, 1, kMaxPointsPerPair);
        c.caps.lines = bounded_count(cf, "lines", c.caps.lines, 0, kMaxLines);
        cf.reject_unknown();
    }
    if (const Json* t = f.optional("concentration")) {
        JsonFields cf(*t, f.path_of("concentration"));
        if (cf.has("cells")) c.concentration.cells = cell_list(cf, "cells");
        if (cf.has("epsilons")) c.concentration.epsilons = positive_list(cf, "epsilons");
        if (cf.has("t")) c.concentration.ts = positive_list(cf, "t");
        if (const Json* k = cf.optional("kolmogorov")) {
            JsonFields kf(*k, cf.path_of("kolmogorov"));
            KolmogorovOptions ko;
            ko.cells = cell_list(kf, "cells");
            ko.b = positive_list(kf, "b");
            ko.eps = positive_or(kf, "epsilon", 1.0);
            if (kf.has("m")) ko.m = bounded_count(kf, "m", 1, 1, ko.cells.size() > 1 ? ko.cells.size() - 1 : 1);
            ko.mc.z = positive_or(kf, "z", ko.mc.z);
            kf.reject_unknown();
            c.concentration.kolmogorov = ko;
        }
        cf.reject_unknown();
    }
    if (const Json* t = f.optional("output")) {
        JsonFields of(*t, f.path_of("output"));
        if (of.has("dir")) c.output.dir = of.string("dir");
        if (of.has("format")) {
            try {
                c.output.format = parse_output_format(of.string("format"));
            } catch (const Error& e) {
                parse_fail(of.path_of("format"), "expected json, csv or both");
            }
        }
        of.reject_unknown();
    }
    f.reject_unknown();
    c.source = j;
    return c;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_json_file(path), path); }

bool Report::all_hold() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.passed(); });
}

Report run(const ExperimentConfig& c) {
    Report out;
    out.scenario = c.scenario;
    out.seed = c.seed;
    // The output location does not affect the results, so it is left out.
    out.config = c.source;
    out.config.erase("output");
    const std::string& s = c.scenario;
    if (s == "ulc-check") run_ulc(c, out);
    else if (s == "polarize") run_polarize(c, out);
    else if (s == "rayleigh-check") run_stability(c, out, false);
    else if (s == "sr-check") run_stability(c, out, true);
    else if (s == "na-check") run_dependence(c, out, false);
    else if (s == "sna-check") run_dependence(c, out, true);
    else if (s == "count-law") run_count_law(c, out);
    else if (s == "domination") run_domination(c, out);
    else if (s == "concentration") run_concentration(c, out);
    else run_sample(c, out);
    return out;
}

std::string report_json_text(const Report& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"check", row.check}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"slack", row.slack},
                            {"status", row.status}, {"n", row.n}});
    const Json doc{{"schema", kReportSchema}, {"scenario", r.scenario}, {"seed", r.seed},
                   {"status", r.all_hold() ? "holds" : "violated"}, {"rows", rows},
                   {"details", r.details}, {"config", r.config}};
    return doc.dump(2) + "\n";
}

std::string report_csv_text(const Report& r) {
    std::ostringstream out;
    out << "scenario,check_name,lhs,rhs,slack,status,seed,n\n";
    for (const auto& row : r.rows)
        out << r.scenario << ',' << row.check << ',' << format_number(row.lhs) << ',' << format_number(row.rhs)
            << ',' << format_number(row.slack) << ',' << row.status << ',' << r.seed << ',' << row.n << '\n';
    return out.str();
}

void write_report(const Report& r, const std::string& dir, OutputFormat format) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::precondition, "cannot create output directory " + dir + ": " + ec.message());
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream f(fs::path(dir) / name, std::ios::binary);
        if (!f) fail(ErrorKind::precondition, "cannot write " + (fs::path(dir) / name).string());
        f << text;
    };
    if (format != OutputFormat::csv) write("report.json", report_json_text(r));
    if (format != OutputFormat::json) write("summary.csv", report_csv_text(r));
}

}  // namespace negassoc
