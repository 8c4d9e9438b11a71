#include "negassoc/ordering.hpp"

#include <algorithm>
#include <cmath>

#include "negassoc/error.hpp"
#include "negassoc/numeric.hpp"

namespace negassoc {

namespace {

constexpr std::size_t kLaplaceGridCap = 200;
const double kLaplaceValues[] = {0.0, 0.25, 0.5, 1.0, 2.0};

std::vector<double> as_doubles(const std::vector<std::size_t>& v) {
    return std::vector<double>(v.begin(), v.end());
}

// Law of the total count over a union of cells.
Pmf union_count_pmf(const JointPmf& law, const std::vector<std::size_t>& cells) {
    int top = 0;
    std::vector<double> probs;
    for (std::size_t a = 0; a < law.size(); ++a) {
        double total = 0.0;
        for (std::size_t c : cells) total += law.point(a)[c];
        const int k = static_cast<int>(std::llround(total));
        top = std::max(top, k);
        if (probs.size() <= static_cast<std::size_t>(k)) probs.resize(static_cast<std::size_t>(k) + 1, 0.0);
        probs[static_cast<std::size_t>(k)] += law.prob(a);
    }
    return Pmf::normalized(std::move(probs), true);
}

}  // namespace

BoundReport make_report(std::string name, double lhs, double rhs, double tol) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.status = r.slack >= -tol ? BoundReport::Status::holds : BoundReport::Status::violated;
    return r;
}

BoundReport moment_factorization_check(const CountVectorLaw& law) {
    const JointPmf& j = law.law;
    const double lhs = j.expectation([](std::span<const double> x) {
        double p = 1.0;
        for (double v : x) p *= v;
        return p;
    });
    const std::vector<double> means = intensity(law);
    double rhs = 1.0;
    for (double m : means) rhs *= m;
    BoundReport r = make_report("moment_factorization", lhs, rhs);
    r.context["intensity"] = means;
    return r;
}

BoundReport void_bound_check(const CountVectorLaw& law, const std::vector<std::size_t>& cells) {
    if (cells.empty()) fail(ErrorKind::precondition, "void_bound_check: empty cell subset");
    const JointPmf& j = law.law;
    for (std::size_t c : cells)
        if (c >= j.dim()) fail(ErrorKind::index_out_of_range, "void_bound_check: cell out of range");
    const double lhs = j.expectation([&](std::span<const double> x) {
        for (std::size_t c : cells)
            if (x[c] != 0.0) return 0.0;
        return 1.0;
    });
    double mean = 0.0;
    for (std::size_t c : cells) mean += j.mean(c);
    BoundReport r = make_report("void_probability", lhs, std::exp(-mean));
    r.context["cells"] = as_doubles(cells);
    r.context["mean"] = {mean};
    return r;
}

BoundReport laplace_bound_check(const CountVectorLaw& law, const std::vector<double>& h,
                                LaplaceSign sign) {
    const JointPmf& j = law.law;
    if (h.size() != j.dim()) fail(ErrorKind::dimension_mismatch, "laplace_bound_check: h has wrong length");
    for (double v : h)
        if (!(v >= 0.0)) fail(ErrorKind::domain, "laplace_bound_check: h must be non-negative");
    const double s = sign == LaplaceSign::negative ? -1.0 : 1.0;
    const double lhs = j.expectation([&](std::span<const double> x) {
        double e = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) e += h[c] * x[c];
        return std::exp(s * e);
    });
    CompensatedSum<double> exponent;
    for (std::size_t c = 0; c < h.size(); ++c) exponent.add(std::expm1(s * h[c]) * j.mean(c));
    BoundReport r = make_report(sign == LaplaceSign::negative ? "laplace_negative" : "laplace_positive",
                                lhs, std::exp(exponent.value()));
    r.context["h"] = h;
    r.context["intensity"] = intensity(law);
    return r;
}

SuperadditivityReport binomial_void_superadditivity(int n, double p, double qb, double qb2,
                                                    std::size_t grid, double phi_tol) {
    if (n < 0) fail(ErrorKind::domain, "binomial_void_superadditivity: negative trial count");
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::domain, "binomial_void_superadditivity: p outside [0, 1]");
    if (!(qb >= 0.0 && qb2 >= 0.0 && qb + qb2 <= 1.0 + 1e-12))
        fail(ErrorKind::domain, "binomial_void_superadditivity: cell masses must be non-negative with sum <= 1");
    if (grid < 2) fail(ErrorKind::domain, "binomial_void_superadditivity: grid needs two points");

    // P_tau(1 - s) = (1 - p s)^n
    auto pgf_at_one_minus = [&](double s) { return std::pow(1.0 - p * s, n); };
    // phi(s) = -n log(1 - p s)
    auto phi = [&](double s) { return -n * std::log1p(-p * s); };

    SuperadditivityReport out;
    out.void_product = make_report("binomial_void_superadditivity", pgf_at_one_minus(qb + qb2),
                                   pgf_at_one_minus(qb) * pgf_at_one_minus(qb2));
    out.void_product.context = {{"n", {static_cast<double>(n)}}, {"p", {p}}, {"q", {qb, qb2}}};

    out.min_phi_gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < grid; ++a) {
        for (std::size_t b = 0; a + b < grid; ++b) {
            const double s = static_cast<double>(a) / static_cast<double>(grid - 1);
            const double t = static_cast<double>(b) / static_cast<double>(grid - 1);
            if (p * (s + t) >= 1.0) continue;  // phi is infinite at p s = 1
            ++out.grid_points;
            out.min_phi_gap = std::min(out.min_phi_gap, phi(s + t) - phi(s) - phi(t));
        }
    }
    out.phi_superadditive = out.min_phi_gap >= -phi_tol;
    return out;
}

bool DominationReport::cx_pass() const {
    return std::all_of(cx.begin(), cx.end(), [](const CxMarginalCheck& c) { return c.result.holds; });
}

bool DominationReport::void_pass() const {
    return std::all_of(void_bounds.begin(), void_bounds.end(), [](const BoundReport& r) { return r.holds(); });
}

bool DominationReport::laplace_pass() const {
    return std::all_of(laplace.begin(), laplace.end(), [](const BoundReport& r) { return r.holds(); });
}

CountVectorLaw count_law(const ProcessModel& p) {
    return std::visit(
        [](const auto& model) -> CountVectorLaw {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, MixedSampledProcess>) return exact_count_law(model);
            else return dpp_count_law(model);
        },
        p);
}

std::vector<std::vector<double>> default_laplace_grid(std::size_t cells) {
    const std::size_t base = std::size(kLaplaceValues);
    std::size_t total = 1;
    for (std::size_t c = 0; c < cells && total <= 1'000'000; ++c) total *= base;
    const std::size_t take = std::min(total, kLaplaceGridCap);
    std::vector<std::vector<double>> out;
    for (std::size_t k = 0; k < take; ++k) {
        // Evenly strided through the full lexicographic grid.
        std::size_t idx = take == total ? k : k * (total - 1) / (take - 1);
        std::vector<double> h(cells);
        for (std::size_t c = cells; c-- > 0;) {
            h[c] = kLaplaceValues[idx % base];
            idx /= base;
        }
        out.push_back(std::move(h));
    }
    return out;
}

DominationReport poisson_domination_report(const CountVectorLaw& law, double mass_floor) {
    DominationReport rep;
    const std::size_t m = law.law.dim();
    if (m > 16) fail(ErrorKind::guard_exceeded, "poisson_domination_report: more than 16 cells");
    rep.intensity = intensity(law);
    rep.truncation_mass = law.truncation_mass;

    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        std::vector<std::size_t> cells;
        for (std::size_t c = 0; c < m; ++c)
            if (mask >> c & 1U) cells.push_back(c);
        const Pmf counts = union_count_pmf(law.law, cells);
        // Poisson comparison at the post-truncation mean of the count law.
        const Pmf poisson = truncated_poisson(counts.mean(), mass_floor).pmf;
        rep.cx.push_back({cells, counts.mean(), cx_dominates(counts, poisson)});
        rep.void_bounds.push_back(void_bound_check(law, cells));
    }
    rep.moment = moment_factorization_check(law);
    for (const auto& h : default_laplace_grid(m))
        rep.laplace.push_back(laplace_bound_check(law, h, LaplaceSign::negative));
    return rep;
}

DominationReport poisson_domination_report(const ProcessModel& p, double mass_floor) {
    return poisson_domination_report(count_law(p), mass_floor);
}

}  // namespace negassoc
