#include "negassoc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "negassoc/error.hpp"
#include "negassoc/numeric.hpp"

namespace negassoc {
namespace {

std::variant<MixedSampler, DppSampler> make_sampler(const ProcessModel& p) {
    if (const auto* m = std::get_if<MixedSampledProcess>(&p)) return MixedSampler(*m);
    return DppSampler(std::get<DppModel>(p));
}

std::size_t model_cells(const ProcessModel& p) {
    if (const auto* m = std::get_if<MixedSampledProcess>(&p)) return m->partition.cells();
    return std::get<DppModel>(p).cells();
}

// Relative slack so that boundary atoms (|x - mean| == eps exactly in real
// arithmetic) are counted on both the exact and the sampled side.
bool reaches(double deviation, double eps) {
    return deviation >= eps - 1e-9 * std::max(1.0, eps);
}

template <class Counts>
double evaluate_functional(const McFunctional& f, const Counts& x) {
    return std::visit(
        [&](const auto& g) -> double {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, VoidFunctional>) {
                for (std::size_t c : g.cells)
                    if (x[c] != 0) return 0.0;
                return 1.0;
            } else if constexpr (std::is_same_v<G, CountMeanFunctional>) {
                return static_cast<double>(x[g.cell]);
            } else {
                double partial = 0.0;
                for (std::size_t k = 0; k < g.cells.size(); ++k) {
                    partial += static_cast<double>(x[g.cells[k]]) - g.means[k];
                    if (k + 1 >= g.start && reaches(std::abs(partial) / g.b[k], g.eps)) return 1.0;
                }
                return 0.0;
            }
        },
        f);
}

bool is_indicator(const McFunctional& f) { return !std::holds_alternative<CountMeanFunctional>(f); }

void check_cell(std::size_t cell, std::size_t cells, const char* who) {
    if (cell >= cells)
        fail(ErrorKind::index_out_of_range,
             std::string(who) + ": cell " + std::to_string(cell) + " out of range");
}

void check_b_sequence(const std::vector<double>& b, const char* who) {
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (!(b[k] > 0.0) || !std::isfinite(b[k]))
            fail(ErrorKind::domain, std::string(who) + ": b must be positive and finite");
        if (k > 0 && !(b[k] > b[k - 1]))
            fail(ErrorKind::domain, std::string(who) + ": b must be strictly increasing");
    }
}

void validate_functional(const McFunctional& f, std::size_t cells) {
    std::visit(
        [&](const auto& g) {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, VoidFunctional>) {
                for (std::size_t c : g.cells) check_cell(c, cells, "void functional");
            } else if constexpr (std::is_same_v<G, CountMeanFunctional>) {
                check_cell(g.cell, cells, "count_mean functional");
            } else {
                if (g.cells.empty()) fail(ErrorKind::precondition, "max_partial_sum: no cells");
                for (std::size_t c : g.cells) check_cell(c, cells, "max_partial_sum functional");
                if (g.b.size() != g.cells.size() || g.means.size() != g.cells.size())
                    fail(ErrorKind::dimension_mismatch, "max_partial_sum: b, means and cells differ in length");
                check_b_sequence(g.b, "max_partial_sum");
                if (!(g.eps > 0.0)) fail(ErrorKind::domain, "max_partial_sum: eps must be positive");
                if (g.start < 1 || g.start > g.cells.size())
                    fail(ErrorKind::domain, "max_partial_sum: start index outside 1..n");
            }
        },
        f);
}

std::pair<double, double> wilson_interval(double p, double n, double z) {
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

struct CellMoments {
    std::vector<double> mean;
    std::vector<double> variance;
};

// Closed forms that avoid building the full count law.
CellMoments cell_moments(const ProcessModel& p) {
    CellMoments out;
    if (const auto* m = std::get_if<MixedSampledProcess>(&p)) {
        const double et = m->tau.mean();
        const double vt = m->tau.variance();
        for (double q : m->partition.q()) {
            out.mean.push_back(q * et);
            out.variance.push_back(q * (1.0 - q) * et + q * q * vt);
        }
        return out;
    }
    const auto& d = std::get<DppModel>(p);
    const std::size_t cells = d.cells();
    out.mean.assign(cells, 0.0);
    out.variance.assign(cells, 0.0);
    const auto n = static_cast<Eigen::Index>(d.ground_size());
    for (Eigen::Index x = 0; x < n; ++x) {
        const int cx = d.cell_of[static_cast<std::size_t>(x)];
        if (cx < 0) continue;
        out.mean[static_cast<std::size_t>(cx)] += d.kernel(x, x);
        out.variance[static_cast<std::size_t>(cx)] += d.kernel(x, x);
        for (Eigen::Index y = 0; y < n; ++y)
            if (d.cell_of[static_cast<std::size_t>(y)] == cx)
                out.variance[static_cast<std::size_t>(cx)] -= d.kernel(x, y) * d.kernel(x, y);
    }
    return out;
}

struct Moments {
    double mean;
    double variance;
};

Moments law_moments(const CountVectorLaw& law, std::size_t cell) {
    const double mean = law.law.mean(cell);
    CompensatedSum<double> var;
    for (std::size_t a = 0; a < law.law.size(); ++a) {
        const double d = law.law.point(a)[cell] - mean;
        var.add(law.law.prob(a) * d * d);
    }
    return {mean, var.value()};
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::domain, std::string(what) + " must be positive and finite");
}

}  // namespace

ProcessSampler::ProcessSampler(const ProcessModel& p) : sampler_(make_sampler(p)), cells_(model_cells(p)) {}

std::vector<int> ProcessSampler::operator()(Stream& stream) const {
    if (const auto* m = std::get_if<MixedSampler>(&sampler_)) return (*m)(stream);
    const auto& d = std::get<DppSampler>(sampler_);
    return d.counts(d(stream));
}

McEstimate mc_estimate(const ProcessModel& p, const McFunctional& f, const McOptions& opts) {
    if (opts.replications < kMinReplications)
        fail(ErrorKind::precondition, "mc_estimate: at least 100 replications are required");
    if (opts.replications > kMaxReplications)
        fail(ErrorKind::guard_exceeded, "mc_estimate: replication count above 1e8");
    check_positive(opts.z, "mc_estimate: z");
    const ProcessSampler sampler(p);
    validate_functional(f, sampler.cells());

    const std::size_t n = opts.replications;
    std::vector<double> values(n);
    const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, 64u));
    auto work = [&](unsigned t) {
        for (std::size_t r = t; r < n; r += threads) {
            Stream stream(opts.seed, r);
            values[r] = evaluate_functional(f, sampler(stream));
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }

    CompensatedSum<double> sum;
    for (double v : values) sum.add(v);
    const double mean = sum.value() / static_cast<double>(n);
    CompensatedSum<double> sq;
    for (double v : values) sq.add((v - mean) * (v - mean));
    const double var = sq.value() / static_cast<double>(n - 1);

    McEstimate out;
    out.estimate = mean;
    out.se = std::sqrt(var / static_cast<double>(n));
    out.z = opts.z;
    out.replications = n;
    out.seed = opts.seed;
    out.ci_normal = {mean - opts.z * out.se, mean + opts.z * out.se};
    if (is_indicator(f)) {
        out.ci_normal.first = std::max(out.ci_normal.first, 0.0);
        out.ci_normal.second = std::min(out.ci_normal.second, 1.0);
        out.ci_wilson = wilson_interval(mean, static_cast<double>(n), opts.z);
    }
    return out;
}

double exact_functional(const CountVectorLaw& law, const McFunctional& f) {
    validate_functional(f, law.law.dim());
    CompensatedSum<double> sum;
    for (std::size_t a = 0; a < law.law.size(); ++a)
        sum.add(law.law.prob(a) * evaluate_functional(f, law.law.point(a)));
    return sum.value();
}

BoundReport chebyshev_bound(const CountVectorLaw& law, std::size_t cell, double eps, double tol) {
    check_positive(eps, "chebyshev_bound: eps");
    check_cell(cell, law.law.dim(), "chebyshev_bound");
    const auto [mean, var] = law_moments(law, cell);
    CompensatedSum<double> two_sided, upper;
    for (std::size_t a = 0; a < law.law.size(); ++a) {
        const double d = law.law.point(a)[cell] - mean;
        if (reaches(std::abs(d), eps)) two_sided.add(law.law.prob(a));
        if (reaches(d, eps)) upper.add(law.law.prob(a));
    }
    BoundReport r = make_report("chebyshev", two_sided.value(), var / (eps * eps), tol);
    r.context["cell"] = {static_cast<double>(cell)};
    r.context["eps"] = {eps};
    r.context["mean"] = {mean};
    r.context["variance"] = {var};
    r.context["upper_tail"] = {upper.value()};
    return r;
}

ChernoffReports chernoff_bound(const CountVectorLaw& law, std::size_t cell, double eps, double t,
                               double tol) {
    check_positive(eps, "chernoff_bound: eps");
    check_positive(t, "chernoff_bound: t");
    check_cell(cell, law.law.dim(), "chernoff_bound");
    const double mean = law.law.mean(cell);
    CompensatedSum<double> up_tail, low_tail, up_mgf, low_mgf;
    for (std::size_t a = 0; a < law.law.size(); ++a) {
        const double x = law.law.point(a)[cell];
        const double p = law.law.prob(a);
        if (reaches(x - mean, eps)) up_tail.add(p);
        if (reaches(mean - x, eps)) low_tail.add(p);
        // e^{-t(mean+eps)} E e^{tN} and e^{t(mean-eps)} E e^{-tN}, folded per atom.
        up_mgf.add(p * std::exp(t * (x - mean - eps)));
        low_mgf.add(p * std::exp(t * (mean - eps - x)));
    }
    ChernoffReports out{make_report("chernoff_upper", up_tail.value(), up_mgf.value(), tol),
                        make_report("chernoff_lower", low_tail.value(), low_mgf.value(), tol)};
    for (BoundReport* r : {&out.upper, &out.lower}) {
        r->context["cell"] = {static_cast<double>(cell)};
        r->context["eps"] = {eps};
        r->context["t"] = {t};
        r->context["mean"] = {mean};
    }
    return out;
}

std::vector<double> default_chernoff_grid() { return {0.05, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0}; }

KolmogorovReport kolmogorov_bound_check(const ProcessModel& p, const KolmogorovOptions& opts) {
    const std::size_t n = opts.cells.size();
    if (n == 0) fail(ErrorKind::precondition, "kolmogorov_bound_check: no cells");
    if (opts.b.size() != n)
        fail(ErrorKind::dimension_mismatch, "kolmogorov_bound_check: b and cells differ in length");
    check_b_sequence(opts.b, "kolmogorov_bound_check");
    check_positive(opts.eps, "kolmogorov_bound_check: eps");
    std::vector<std::size_t> sorted = opts.cells;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        fail(ErrorKind::precondition, "kolmogorov_bound_check: cells must be distinct");
    if (opts.m && (*opts.m < 1 || *opts.m >= n))
        fail(ErrorKind::domain, "kolmogorov_bound_check: m must satisfy 1 <= m < n");
    const std::size_t cells = model_cells(p);
    for (std::size_t c : opts.cells) check_cell(c, cells, "kolmogorov_bound_check");

    const CellMoments moments = cell_moments(p);
    std::vector<double> means, vars;
    for (std::size_t c : opts.cells) {
        means.push_back(moments.mean[c]);
        vars.push_back(std::max(moments.variance[c], 0.0));
    }

    CompensatedSum<double> weighted;
    double constant = 8.0;
    if (!opts.m) {
        for (std::size_t i = 0; i < n; ++i) weighted.add(vars[i] / (opts.b[i] * opts.b[i]));
    } else {
        constant = 32.0;
        const std::size_t m = *opts.m;
        const double bm = opts.b[m - 1];
        for (std::size_t i = 0; i < n; ++i)
            weighted.add(i < m ? vars[i] / (bm * bm) : vars[i] / (opts.b[i] * opts.b[i]));
    }
    const double rhs = constant / (opts.eps * opts.eps) * weighted.value();

    const MaxPartialSumFunctional functional{opts.cells, opts.b, means, opts.eps, opts.m.value_or(1)};
    KolmogorovReport out;
    out.estimate = mc_estimate(p, functional, opts.mc);
    try {
        out.exact_lhs = exact_functional(count_law(p), functional);
        out.evidence = "monte-carlo+exact";
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::guard_exceeded) throw;
    }

    const double upper = out.estimate.ci_upper();
    BoundReport& r = out.report;
    r.name = opts.m ? "kolmogorov_m" : "kolmogorov";
    r.lhs = out.estimate.estimate;
    r.rhs = rhs;
    r.slack = rhs - upper;
    r.status = upper <= rhs + opts.tol ? BoundReport::Status::holds : BoundReport::Status::violated;
    r.context["ci_upper"] = {upper};
    r.context["se"] = {out.estimate.se};
    r.context["variances"] = vars;
    r.context["means"] = means;
    r.context["b"] = opts.b;
    r.context["eps"] = {opts.eps};
    if (opts.m) r.context["m"] = {static_cast<double>(*opts.m)};
    if (out.exact_lhs) r.context["exact_lhs"] = {*out.exact_lhs};
    return out;
}

}  // namespace negassoc
