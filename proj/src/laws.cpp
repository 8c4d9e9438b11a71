#include "negassoc/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "negassoc/error.hpp"
#include "negassoc/numeric.hpp"

namespace negassoc {

namespace {

constexpr double kRelativeSlack = 1e-12;
constexpr double kMonotoneTolerance = 1e-10;
constexpr double kStopLossTolerance = 1e-10;
constexpr double kMeanTolerance = 1e-9;
constexpr std::size_t kEnumerationGuard = 1'000'000;

void check_probability(double p, const char* who) {
    if (!(p >= 0.0 && p <= 1.0))
        fail(ErrorKind::domain, std::string(who) + ": probability " + std::to_string(p) +
                                    " outside [0, 1]");
}

void check_mass_floor(double floor) {
    if (!(floor > 0.0 && floor <= 1.0 - 1e-15))
        fail(ErrorKind::domain, "mass floor must lie in (0, 1 - 1e-15]");
}

// p_k^2 >= p_{k-1} p_{k+1} with relative slack, after dividing each entry by
// weight(k). The first failing k is either an internal zero or the smallest
// index where the inequality breaks.
template <typename Weight>
SequenceCheck log_concave_check(const Pmf& p, Weight weight) {
    const int n = p.bound();
    int first = -1, last = -1;
    for (int k = 0; k <= n; ++k) {
        if (p[k] > 0.0) {
            if (first < 0) first = k;
            last = k;
        }
    }
    for (int k = 1; k < n; ++k) {
        if (k > first && k < last && p[k] == 0.0) return {false, k};
        const double a = p[k - 1] / weight(k - 1);
        const double b = p[k] / weight(k);
        const double c = p[k + 1] / weight(k + 1);
        const double outer = a * c;
        if (outer - b * b > kRelativeSlack * outer) return {false, k};
    }
    return {true, std::nullopt};
}

template <typename Term>
TruncatedPmf truncate_by_mass(Term term, double floor, int hard_limit) {
    std::vector<double> probs;
    CompensatedSum<double> cum;
    for (int k = 0;; ++k) {
        const double t = term(k);
        probs.push_back(t);
        cum.add(t);
        if (cum.value() >= floor) break;
        if (k >= hard_limit)
            fail(ErrorKind::guard_exceeded,
                 "truncation did not reach the mass floor within " + std::to_string(hard_limit) +
                     " terms");
    }
    TruncatedPmf out;
    out.retained_mass = std::min(cum.value(), 1.0);
    out.truncation_point = static_cast<int>(probs.size()) - 1;
    out.pmf = Pmf::normalized(std::move(probs), true);
    return out;
}

double poisson_term(double lambda, int k, double& prev) {
    prev = k == 0 ? std::exp(-lambda) : prev * lambda / k;
    return prev;
}

}  // namespace

Pmf::Pmf(std::vector<double> probs, bool padded) : probs_(std::move(probs)), padded_(padded) {
    if (probs_.empty()) fail(ErrorKind::degenerate_support, "Pmf: empty probability list");
    CompensatedSum<double> total;
    for (double w : probs_) {
        if (!(w >= 0.0) || !std::isfinite(w))
            fail(ErrorKind::domain, "Pmf: entries must be finite and non-negative");
        total.add(w);
    }
    if (std::abs(total.value() - 1.0) > kSumTolerance)
        fail(ErrorKind::domain, "Pmf: entries sum to " + std::to_string(total.value()));
    if (!padded_ && probs_.size() > 1 && probs_.back() == 0.0)
        fail(ErrorKind::precondition, "Pmf: trailing zero without the padded flag");
}

Pmf Pmf::point_mass(int k) {
    if (k < 0) fail(ErrorKind::domain, "point_mass: negative support point");
    std::vector<double> probs(static_cast<std::size_t>(k) + 1, 0.0);
    probs.back() = 1.0;
    return Pmf(std::move(probs));
}

Pmf Pmf::normalized(std::vector<double> weights, bool padded) {
    CompensatedSum<double> total;
    for (double w : weights) total.add(w);
    const double t = total.value();
    if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorKind::empty_event, "Pmf: total weight is not positive");
    for (double& w : weights) w /= t;
    const bool trailing_zero = weights.size() > 1 && weights.back() == 0.0;
    return Pmf(std::move(weights), padded || trailing_zero);
}

double Pmf::mean() const {
    CompensatedSum<double> s;
    for (int k = 1; k <= bound(); ++k) s.add(k * probs_[static_cast<std::size_t>(k)]);
    return s.value();
}

double Pmf::variance() const {
    const double mu = mean();
    CompensatedSum<double> s;
    for (int k = 0; k <= bound(); ++k) {
        const double d = k - mu;
        s.add(d * d * probs_[static_cast<std::size_t>(k)]);
    }
    return s.value();
}

double Pmf::pgf(double z) const {
    double acc = 0.0;
    for (int k = bound(); k >= 0; --k) acc = acc * z + probs_[static_cast<std::size_t>(k)];
    return acc;
}

SequenceCheck is_pf2(const Pmf& p) {
    return log_concave_check(p, [](int) { return 1.0; });
}

SequenceCheck is_ulc(const Pmf& p) {
    const int n = p.bound();
    if (n < 1) fail(ErrorKind::degenerate_support, "is_ulc: support bound must be at least 1");
    return log_concave_check(p, [n](int k) { return binomial_coefficient(n, k); });
}

Pmf poisson_binomial(std::span<const double> ps) {
    std::vector<double> probs{1.0};
    for (double p : ps) {
        check_probability(p, "poisson_binomial");
        std::vector<double> next(probs.size() + 1, 0.0);
        for (std::size_t k = 0; k < probs.size(); ++k) {
            next[k] += probs[k] * (1.0 - p);
            next[k + 1] += probs[k] * p;
        }
        probs = std::move(next);
    }
    const bool trailing_zero = probs.size() > 1 && probs.back() == 0.0;
    return Pmf(std::move(probs), trailing_zero);
}

Pmf convolve(const Pmf& p, const Pmf& q) {
    std::vector<double> out(static_cast<std::size_t>(p.bound() + q.bound()) + 1, 0.0);
    for (int i = 0; i <= p.bound(); ++i) {
        if (p[i] == 0.0) continue;
        for (int j = 0; j <= q.bound(); ++j) out[static_cast<std::size_t>(i + j)] += p[i] * q[j];
    }
    const bool trailing_zero = out.size() > 1 && out.back() == 0.0;
    return Pmf(std::move(out), trailing_zero);
}

TruncatedPmf truncated_poisson(double lambda, double mass_floor) {
    if (!(lambda >= 0.0) || lambda > 700.0)
        fail(ErrorKind::domain, "truncated_poisson: rate must lie in [0, 700]");
    check_mass_floor(mass_floor);
    double prev = 0.0;
    const int limit = static_cast<int>(lambda + 60.0 * std::sqrt(lambda) + 200.0);
    return truncate_by_mass([&](int k) { return poisson_term(lambda, k, prev); }, mass_floor, limit);
}

TruncatedPmf truncated_geometric(double success, double mass_floor) {
    if (!(success > 0.0 && success <= 1.0))
        fail(ErrorKind::domain, "truncated_geometric: success probability must lie in (0, 1]");
    check_mass_floor(mass_floor);
    double prev = success;
    return truncate_by_mass(
        [&](int k) {
            if (k > 0) prev *= 1.0 - success;
            return prev;
        },
        mass_floor, 100'000);
}

Pmf binomial(int n, double p) {
    if (n < 0) fail(ErrorKind::domain, "binomial: negative trial count");
    check_probability(p, "binomial");
    std::vector<double> probs(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        probs[static_cast<std::size_t>(k)] =
            binomial_coefficient(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
    return Pmf::normalized(std::move(probs), true);
}

TruncatedPmf class_q_pmf(double lambda, std::span<const double> ps, double mass_floor) {
    if (!(lambda >= 0.0) || lambda > 700.0)
        fail(ErrorKind::domain, "class_q_pmf: Poisson rate must lie in [0, 700]");
    check_mass_floor(mass_floor);
    const Pmf pb = poisson_binomial(ps);
    if (lambda == 0.0) {
        // Finite support; cut at the first bound reaching the floor.
        const auto probs = pb.probs();
        return truncate_by_mass(
            [&](int k) { return probs[static_cast<std::size_t>(k)]; }, mass_floor, pb.bound());
    }
    std::vector<double> pois;
    double prev = 0.0;
    const int limit = pb.bound() + static_cast<int>(lambda + 60.0 * std::sqrt(lambda) + 200.0);
    return truncate_by_mass(
        [&](int k) {
            pois.push_back(poisson_term(lambda, k, prev));
            CompensatedSum<double> s;
            for (int j = 0; j <= std::min(k, pb.bound()); ++j)
                s.add(pb[j] * pois[static_cast<std::size_t>(k - j)]);
            return s.value();
        },
        mass_floor, limit);
}

JointPmf condition_n_joint(std::span<const Pmf> laws, int s) {
    if (laws.size() < 2)
        fail(ErrorKind::dimension_mismatch, "condition_n_joint: need S_0 and at least one S_i");
    if (s < 0) fail(ErrorKind::empty_event, "condition_n_joint: negative target sum");
    const std::size_t n = laws.size() - 1;

    std::map<JointPmf::Point, double> weights;
    std::vector<int> cur(n, 0);
    std::size_t visited = 0;
    auto rec = [&](auto&& self, std::size_t i, int partial, double w) -> void {
        if (w == 0.0) return;
        if (i == n) {
            if (++visited > kEnumerationGuard)
                fail(ErrorKind::guard_exceeded, "condition_n_joint: slice exceeds 10^6 vectors");
            const double tail = laws[0][s - partial];
            if (tail == 0.0) return;
            weights[JointPmf::Point(cur.begin(), cur.end())] += w * tail;
            return;
        }
        const Pmf& law = laws[i + 1];
        for (int v = 0; v <= std::min(law.bound(), s - partial); ++v) {
            cur[i] = v;
            self(self, i + 1, partial + v, w * law[v]);
        }
        cur[i] = 0;
    };
    rec(rec, 0, 0, 1.0);
    if (weights.empty())
        fail(ErrorKind::empty_event,
             "condition_n_joint: target sum " + std::to_string(s) + " is unreachable");
    return JointPmf::from_weights(n, weights, true);
}

EfronCheck efron_monotone_check(std::span<const Pmf> laws, const MonotoneFunction& phi) {
    if (laws.empty()) fail(ErrorKind::dimension_mismatch, "efron_monotone_check: no laws");
    std::map<int, std::pair<CompensatedSum<double>, CompensatedSum<double>>> by_sum;
    std::vector<int> cur(laws.size(), 0);
    std::size_t visited = 0;
    auto rec = [&](auto&& self, std::size_t i, int partial, double w) -> void {
        if (w == 0.0) return;
        if (i == laws.size()) {
            if (++visited > kEnumerationGuard)
                fail(ErrorKind::guard_exceeded, "efron_monotone_check: support exceeds 10^6 vectors");
            auto& [num, den] = by_sum[partial];
            num.add(w * phi(cur));
            den.add(w);
            return;
        }
        for (int v = 0; v <= laws[i].bound(); ++v) {
            cur[i] = v;
            self(self, i + 1, partial + v, w * laws[i][v]);
        }
    };
    rec(rec, 0, 0, 1.0);
    if (by_sum.empty()) fail(ErrorKind::empty_event, "efron_monotone_check: no reachable sum");

    EfronCheck out;
    for (auto& [s, acc] : by_sum) {
        out.sums.push_back(s);
        out.conditional_means.push_back(acc.first.value() / acc.second.value());
    }
    for (std::size_t i = 1; i < out.sums.size(); ++i) {
        if (out.conditional_means[i] < out.conditional_means[i - 1] - kMonotoneTolerance) {
            out.holds = false;
            out.violating_pair = {out.sums[i - 1], out.sums[i]};
            break;
        }
    }
    return out;
}

double stop_loss(const Pmf& p, double k) {
    CompensatedSum<double> s;
    for (int j = 0; j <= p.bound(); ++j)
        if (j > k) s.add((j - k) * p[j]);
    return s.value();
}

CxCheck cx_dominates(const Pmf& p, const Pmf& q) {
    CxCheck out;
    out.mean_gap = p.mean() - q.mean();
    if (std::abs(out.mean_gap) > kMeanTolerance) {
        out.holds = false;
        return out;
    }
    const int top = std::max(p.bound(), q.bound());
    out.min_stop_loss_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= top; ++k) {
        const double gap = stop_loss(q, k) - stop_loss(p, k);
        out.min_stop_loss_gap = std::min(out.min_stop_loss_gap, gap);
        if (gap < -kStopLossTolerance && !out.witness) {
            out.holds = false;
            out.witness = k;
        }
    }
    return out;
}

}  // namespace negassoc
