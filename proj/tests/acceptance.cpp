// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "negassoc/dependence.hpp"
#include "negassoc/harness.hpp"
#include "negassoc/multiaffine.hpp"
#include "negassoc/ordering.hpp"
#include "negassoc/pointproc.hpp"
#include "support/generators.hpp"

using namespace negassoc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Tally {
    int total = 0;
    int good = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++total;
        if (ok) ++good;
        else if (first_failure.empty()) first_failure = what;
    }
    bool pass() const { return good == total; }
    std::string summary() const {
        std::string s = std::to_string(good) + "/" + std::to_string(total);
        if (!first_failure.empty()) s += "; first failure: " + first_failure;
        return s;
    }
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

bool na_holds(const JointPmf& law) {
    DependenceOptions o;
    o.tol = 1e-10;
    return is_na(law, o).holds();
}

double min_domination_slack(const DominationReport& r) {
    double m = r.moment.slack;
    for (const auto& c : r.cx) m = std::min({m, c.result.min_stop_loss_gap, -std::abs(c.result.mean_gap)});
    for (const auto& v : r.void_bounds) m = std::min(m, v.slack);
    for (const auto& l : r.laplace) m = std::min(m, l.slack);
    return m;
}

// --- 1 ---------------------------------------------------------------------
Outcome class_q_na() {
    Tally t;
    Stream s(101, 0);
    for (int i = 0; i < 50; ++i) {
        const auto ps = gen::probabilities(s, 1 + static_cast<std::size_t>(s.uniform(0, 4)));
        const double lambda = i % 2 ? s.uniform(0.0, 1.0) : 0.0;
        const TruncatedPmf tau = lambda > 0 ? class_q_pmf(lambda, ps) : TruncatedPmf{poisson_binomial(ps), 0, 1.0};
        const std::size_t m = i % 3 ? 2 : 3;
        const MixedSampledProcess p{tau.pmf, PartitionModel(gen::partition(s, m)), tau.retained_mass};
        t.record(na_holds(exact_count_law(p).law), "configuration " + std::to_string(i));
    }
    return {t.pass(), t.summary() + " configurations hold"};
}

// --- 2 ---------------------------------------------------------------------
Outcome ulc_na() {
    Tally t;
    Stream s(202, 0);
    int complex_rooted = 0;
    int attempts = 0;
    std::vector<Pmf> taus;
    // Rejection sampling for laws whose generating polynomial has non-real roots.
    while (complex_rooted < 10 && attempts < 100'000) {
        ++attempts;
        const Pmf tau = gen::ulc(s, 3, 2.0);
        const RootednessResult r = generating_polynomial_real_rootedness(tau);
        if (!r.real_rooted && !r.ambiguous) {
            taus.push_back(tau);
            ++complex_rooted;
        }
    }
    while (taus.size() < 50) taus.push_back(gen::ulc(s, 3));
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const bool ulc = is_ulc(taus[i]).holds;
        const MixedSampledProcess p{taus[i], PartitionModel(gen::partition(s, i % 2 ? 2 : 3))};
        t.record(ulc && na_holds(exact_count_law(p).law), "law " + std::to_string(i));
    }
    return {t.pass() && complex_rooted >= 5,
            t.summary() + " hold; " + std::to_string(complex_rooted) + " not real-rooted (" +
                std::to_string(attempts) + " draws)"};
}

// --- 3 ---------------------------------------------------------------------
Outcome newton() {
    Tally t;
    Stream s(303, 0);
    for (int i = 0; i < 200; ++i) {
        const auto ps = gen::probabilities(s, 1 + static_cast<std::size_t>(i % 10));
        t.record(is_ulc(poisson_binomial(ps)).holds, "law " + std::to_string(i));
    }
    return {t.pass(), t.summary() + " Poisson-binomial laws are ULC"};
}

// --- 4 ---------------------------------------------------------------------
Outcome polarization() {
    Stream s(404, 0);
    Tally a, b, c;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Pmf tau = gen::pmf(s, 1 + i % 10);
        const auto diag = diagonal_coefficients(polarize(tau));
        double err = 0.0;
        for (int k = 0; k <= tau.bound(); ++k) err = std::max(err, std::abs(diag[static_cast<std::size_t>(k)] - tau[k]));
        worst = std::max(worst, err);
        a.record(err <= 1e-12, "pmf " + std::to_string(i));
    }
    double worst_rel = 0.0;
    for (int n = 1; n <= 10; ++n)
        for (double p = 0.05; p < 1.0; p += 0.1) {
            const SubsetMeasure pol = polarize(binomial(n, p));
            const std::vector<double> ps(static_cast<std::size_t>(n), p);
            const SubsetMeasure prod = product_measure(ps);
            double rel = 0.0;
            for (SubsetMeasure::Mask m = 0; m < pol.size(); ++m)
                rel = std::max(rel, std::abs(pol[m] - prod[m]) / std::max(prod[m], 1e-300));
            worst_rel = std::max(worst_rel, rel);
            b.record(rel <= 1e-14, "n=" + std::to_string(n) + " p=" + fmt(p));
        }
    for (int i = 0; i < 40; ++i) {
        const Pmf tau = gen::ulc(s, 1 + i % 4);
        c.record(na_holds(subset_indicator_law(polarize(tau))), "ulc " + std::to_string(i));
    }
    return {a.pass() && b.pass() && c.pass(), "diagonal " + a.summary() + " (max err " + fmt(worst) +
                                                  "); binomial " + b.summary() + " (max rel " + fmt(worst_rel) +
                                                  "); ULC NA " + c.summary()};
}

// --- 5 ---------------------------------------------------------------------
Outcome rayleigh() {
    Stream s(505, 0);
    Tally t;
    for (int i = 0; i < 20; ++i) {
        const auto ps = gen::probabilities(s, 1 + static_cast<std::size_t>(i % 6));
        t.record(!is_strongly_rayleigh(product_measure(ps)).violated(), "product " + std::to_string(i));
    }
    const SubsetMeasure mu(2, {0.5, 0.0, 0.0, 0.5});
    const StabilityVerdict v = is_strongly_rayleigh(mu);
    bool witness_ok = false;
    double slack = 0.0;
    if (v.violated() && v.pair_witness) {
        const auto& w = *v.pair_witness;
        slack = rayleigh_at<double>(mu, w.x, w.i, w.j);
        witness_ok = slack <= -0.25 + 1e-10;
    }
    return {t.pass() && witness_ok,
            "products " + t.summary() + " no violation; 0.5+0.5z1z2 witness slack " + fmt(slack)};
}

// --- 6 ---------------------------------------------------------------------
Outcome determinantal() {
    Stream s(606, 0);
    Tally mass, single, na, freq;
    std::size_t atoms = 0;
    for (int i = 0; i < 20; ++i) {
        const int n = 1 + i % 6;
        const DppModel d = gen::dpp(s, n, std::min(n, 2 + i % 2));
        const std::string tag = "kernel " + std::to_string(i);
        const DppSubsetLaw exact = dpp_exact_law(d);
        double total = 0.0;
        for (double w : exact.law.coeffs()) total += w;
        mass.record(std::abs(total - 1.0) <= 1e-10, tag);

        // One tracked cell made of a random subset of ground points.
        std::vector<int> cell_of(static_cast<std::size_t>(n), -1);
        std::vector<int> members;
        for (int x = 0; x < n; ++x)
            if (s.uniform() < 0.6 || (x == n - 1 && members.empty())) {
                cell_of[static_cast<std::size_t>(x)] = 0;
                members.push_back(x);
            }
        Eigen::MatrixXd sub(members.size(), members.size());
        for (std::size_t r = 0; r < members.size(); ++r)
            for (std::size_t c = 0; c < members.size(); ++c) sub(r, c) = d.kernel(members[r], members[c]);
        const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sub).eigenvalues();
        std::vector<double> lam;
        for (Eigen::Index k = 0; k < ev.size(); ++k) lam.push_back(std::clamp(ev[k], 0.0, 1.0));
        const Pmf expected = poisson_binomial(lam);
        const Pmf got = dpp_count_law(DppModel{d.kernel, cell_of}).law.coordinate_pmf(0);
        double err = 0.0;
        for (int k = 0; k <= std::max(expected.bound(), got.bound()); ++k)
            err = std::max(err, std::abs(expected[k] - got[k]));
        single.record(err <= 1e-10, tag);

        if (d.cells() >= 2) na.record(na_holds(dpp_count_law(d).law), tag);

        // Per-atom frequencies; one draw of slack covers the discreteness.
        constexpr std::size_t kDraws = 100'000;
        const DppSampler sampler(d);
        Stream draws(6060, static_cast<std::uint64_t>(i));
        std::vector<std::size_t> hits(exact.law.size(), 0);
        for (std::size_t r = 0; r < kDraws; ++r) {
            SubsetMeasure::Mask mask = 0;
            for (int x : sampler(draws)) mask |= 1U << x;
            ++hits[mask];
        }
        bool ok = true;
        for (SubsetMeasure::Mask m = 0; m < exact.law.size(); ++m) {
            const double p = exact.law[m];
            const double f = static_cast<double>(hits[m]) / kDraws;
            const double sigma = std::sqrt(p * (1 - p) / kDraws);
            if (std::abs(f - p) > 4 * sigma + 1.0 / kDraws) ok = false;
            ++atoms;
        }
        freq.record(ok, tag);
    }
    return {mass.pass() && single.pass() && na.pass() && freq.pass(),
            "mass " + mass.summary() + "; single-cell " + single.summary() + "; NA " + na.summary() +
                "; sampler " + freq.summary() + " over " + std::to_string(atoms) + " atoms"};
}

// --- 7 ---------------------------------------------------------------------
Outcome domination() {
    Stream s(707, 0);
    Tally a, b, c;
    double worst = HUGE_VAL;
    auto check = [&](Tally& t, const ProcessModel& p, const std::string& tag) {
        const DominationReport r = poisson_domination_report(p);
        const double slack = min_domination_slack(r);
        worst = std::min(worst, slack);
        t.record(r.pass() && slack >= -1e-10, tag);
    };
    const std::vector<std::vector<double>> parts{{0.5}, {0.3, 0.5}, {0.2, 0.2, 0.2}, {0.5, 0.5}};
    for (int n = 1; n <= 6; ++n)
        for (double p : {0.2, 0.5, 0.8})
            for (const auto& q : parts)
                check(a, MixedSampledProcess{binomial(n, p), PartitionModel(q)},
                      "binomial n=" + std::to_string(n) + " p=" + fmt(p));
    for (int i = 0; i < 20; ++i)
        check(b, MixedSampledProcess{gen::ulc(s, 1 + i % 6), PartitionModel(gen::partition(s, 2 + i % 2))},
              "ulc " + std::to_string(i));
    for (int i = 0; i < 20; ++i) {
        const int n = 2 + i % 5;
        check(c, gen::dpp(s, n, std::min(n, 2 + i % 2)), "dpp " + std::to_string(i));
    }
    return {a.pass() && b.pass() && c.pass(), "binomial " + a.summary() + "; ULC " + b.summary() + "; DPP " +
                                                  c.summary() + "; min slack " + fmt(worst)};
}

// --- 8 ---------------------------------------------------------------------
Outcome binomial_void() {
    Tally t;
    double worst = HUGE_VAL;
    for (int n = 1; n <= 10; ++n)
        for (int pi = 0; pi < 10; ++pi)
            for (int qi = 0; qi < 10; ++qi) {
                const double p = 0.05 + 0.1 * pi;
                const double q = 0.05 * (qi + 1);  // qB + qB' <= 1
                const SuperadditivityReport r = binomial_void_superadditivity(n, p, q, q);
                worst = std::min(worst, r.min_phi_gap);
                t.record(r.holds() && r.min_phi_gap >= -1e-12,
                         "n=" + std::to_string(n) + " p=" + fmt(p) + " q=" + fmt(q));
            }
    return {t.pass(), t.summary() + " grid points; min phi gap " + fmt(worst)};
}

// --- 9 ---------------------------------------------------------------------
Outcome conditioning() {
    Tally na, efron;
    for (double success : {0.3, 0.5, 0.7})
        for (std::size_t k : {3, 4}) {
            const std::vector<Pmf> laws(k, truncated_geometric(success).pmf);
            for (int s = 0; s <= 8; ++s)
                na.record(na_holds(condition_n_joint(laws, s)),
                          "geometric " + fmt(success) + " k=" + std::to_string(k) + " s=" + std::to_string(s));
        }
    const MonotoneFunction sum = [](std::span<const int> x) {
        double t = 0;
        for (int v : x) t += v;
        return t;
    };
    const MonotoneFunction first = [](std::span<const int> x) { return double(x[0]); };
    for (std::size_t k : {2, 3, 4})
        for (double p : {0.2, 0.5, 0.8}) {
            const std::vector<Pmf> bern(k, binomial(1, p));
            // The joint support of k geometrics grows like bound^k.
            const std::vector<Pmf> geo(std::min<std::size_t>(k, 3), truncated_geometric(p, 1 - 1e-6).pmf);
            for (const auto* phi : {&sum, &first}) {
                efron.record(efron_monotone_check(bern, *phi).holds, "bernoulli " + fmt(p));
                efron.record(efron_monotone_check(geo, *phi).holds, "geometric " + fmt(p));
            }
        }
    return {na.pass() && efron.pass(), "NA " + na.summary() + "; Efron " + efron.summary()};
}

// --- 10 --------------------------------------------------------------------
Outcome concentration() {
    Stream s(1010, 0);
    Tally bounds, kol;
    for (int i = 0; i < 100; ++i) {
        const std::size_t m = 1 + static_cast<std::size_t>(i % 3);
        const ProcessModel p = i % 4 == 3 ? ProcessModel(gen::dpp(s, 2 + i % 5, static_cast<int>(std::min<std::size_t>(m, 2))))
                                          : ProcessModel(MixedSampledProcess{gen::pmf(s, 1 + i % 8),
                                                                             PartitionModel(gen::partition(s, m))});
        const CountVectorLaw law = count_law(p);
        bool ok = true;
        for (std::size_t c = 0; c < law.law.dim(); ++c)
            for (double eps : {0.25, 0.5, 1.0, 2.0}) {
                ok = ok && chebyshev_bound(law, c, eps).holds();
                for (double t : default_chernoff_grid()) {
                    const ChernoffReports r = chernoff_bound(law, c, eps, t);
                    ok = ok && r.upper.holds() && r.lower.holds();
                }
            }
        bounds.record(ok, "configuration " + std::to_string(i));
    }
    double worst = HUGE_VAL;
    for (int i = 0; i < 10; ++i) {
        const std::size_t m = 2 + static_cast<std::size_t>(i % 3);
        const ProcessModel p = i % 2 ? ProcessModel(MixedSampledProcess{binomial(2 + i % 5, s.uniform(0.2, 0.8)),
                                                                       PartitionModel(gen::partition(s, m))})
                                     : ProcessModel(gen::dpp(s, 2 * static_cast<int>(m), static_cast<int>(m)));
        KolmogorovOptions k;
        for (std::size_t c = 0; c < m; ++c) {
            k.cells.push_back(c);
            k.b.push_back(static_cast<double>(c + 1));
        }
        k.eps = i % 3 ? 0.5 : 1.0;
        if (i % 4 == 1) k.m = 1;
        k.mc = McOptions{100'000, 1000 + static_cast<std::uint64_t>(i), 1, 4.0};
        const KolmogorovReport r = kolmogorov_bound_check(p, k);
        worst = std::min(worst, r.report.slack);
        kol.record(r.report.holds(), "kolmogorov " + std::to_string(i));
    }
    return {bounds.pass() && kol.pass(),
            "Chebyshev/Chernoff " + bounds.summary() + "; Kolmogorov " + kol.summary() + " (min slack " +
                fmt(worst) + ")"};
}

// --- 11 --------------------------------------------------------------------
Outcome reproducibility() {
    Tally t;
    const Json mixed{{"type", "mixed"},
                     {"tau", {{"kind", "poisson"}, {"params", {{"lambda", 0.8}}}}},
                     {"partition", {0.3, 0.4}}};
    const Json dpp{{"type", "dpp"}, {"kernel", {{0.6, 0.2, 0.0}, {0.2, 0.5, 0.1}, {0.0, 0.1, 0.4}}}, {"cells", {0, 1, 1}}};
    std::vector<Json> configs;
    for (const char* scenario : {"na-check", "sna-check", "sr-check", "rayleigh-check", "count-law", "domination",
                                 "concentration", "sample"})
        for (const Json& p : {mixed, dpp}) {
            if (std::string(scenario) == "sr-check" || std::string(scenario) == "rayleigh-check") {
                if (&p == &dpp) continue;
            }
            configs.push_back(Json{{"schema", kConfigSchema},
                                   {"scenario", scenario},
                                   {"seed", 42},
                                   {"replications", 5000},
                                   {"process", p}});
        }
    Json kol = configs.front();
    kol["scenario"] = "concentration";
    kol["concentration"] = Json{{"kolmogorov", {{"cells", {0, 1}}, {"b", {1, 2}}}}};
    configs.push_back(kol);
    configs.push_back(Json{{"schema", kConfigSchema}, {"scenario", "ulc-check"}, {"seed", 1}, {"tau", {0.1, 0.6, 0.3}}});
    configs.push_back(Json{{"schema", kConfigSchema}, {"scenario", "polarize"}, {"seed", 1}, {"tau", {0.1, 0.6, 0.3}}});
    for (const Json& j : configs) {
        const std::string text = j.dump();
        const std::string first = report_json_text(run(parse_config(parse_json_text(text, "config"))));
        const std::string second = report_json_text(run(parse_config(parse_json_text(text, "config"))));
        t.record(first == second, j["scenario"].get<std::string>());
    }
    return {t.pass(), t.summary() + " configurations byte-identical"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"NA of class-Q mixed sampled processes", class_q_na},
        {"NA of ULC mixed sampled processes", ulc_na},
        {"Poisson-binomial laws are ULC", newton},
        {"polarization", polarization},
        {"Rayleigh checks", rayleigh},
        {"determinantal processes", determinantal},
        {"Poisson domination", domination},
        {"binomial void superadditivity", binomial_void},
        {"conditioning and Efron", conditioning},
        {"concentration bounds", concentration},
        {"report reproducibility", reproducibility},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
