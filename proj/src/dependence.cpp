#include "negassoc/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boykov_kolmogorov_max_flow.hpp>

#include "negassoc/error.hpp"
#include "negassoc/numeric.hpp"

namespace negassoc {

namespace {

using Point = JointPmf::Point;

// Covariances below this are treated as rounding noise for margin warnings.
constexpr double kNoiseFloor = 1e-13;
constexpr double kMarginalTolerance = 1e-10;

struct Projection {
    std::vector<Point> points;
    std::vector<std::size_t> atom_index;  // atom -> point
    std::vector<double> prob;
};

Point project_point(std::span<const double> x, std::span<const std::size_t> coords) {
    Point p;
    p.reserve(coords.size());
    for (std::size_t c : coords) p.push_back(x[c]);
    return p;
}

Projection project(const JointPmf& law, std::span<const std::size_t> coords) {
    std::map<Point, std::size_t> index;
    for (std::size_t a = 0; a < law.size(); ++a) index.emplace(project_point(law.point(a), coords), 0);
    Projection out;
    for (auto& [pt, idx] : index) {
        idx = out.points.size();
        out.points.push_back(pt);
    }
    out.prob.assign(out.points.size(), 0.0);
    out.atom_index.resize(law.size());
    for (std::size_t a = 0; a < law.size(); ++a) {
        const std::size_t idx = index.at(project_point(law.point(a), coords));
        out.atom_index[a] = idx;
        out.prob[idx] += law.prob(a);
    }
    return out;
}

// Joint mass of (first-block point, second-block point), grouped by the first.
using Rows = std::vector<std::vector<std::pair<std::size_t, double>>>;

Rows joint_rows(const JointPmf& law, const Projection& first, const Projection& second) {
    Rows rows(first.points.size());
    for (std::size_t a = 0; a < law.size(); ++a)
        rows[first.atom_index[a]].emplace_back(second.atom_index[a], law.prob(a));
    return rows;
}

// w_o = P(first in U, second = o) - P(first in U) P(second = o)
std::vector<double> indicator_weights(const Rows& rows, const std::vector<bool>& in_u,
                                      const std::vector<double>& second_prob) {
    std::vector<double> w(second_prob.size(), 0.0);
    CompensatedSum<double> pu;
    for (std::size_t e = 0; e < rows.size(); ++e) {
        if (!in_u[e]) continue;
        for (const auto& [o, p] : rows[e]) {
            w[o] += p;
            pu.add(p);
        }
    }
    const double p_u = pu.value();
    for (std::size_t o = 0; o < w.size(); ++o) w[o] -= p_u * second_prob[o];
    return w;
}

double sum_over(const std::vector<double>& w, const std::vector<bool>& members) {
    CompensatedSum<double> s;
    for (std::size_t o = 0; o < w.size(); ++o)
        if (members[o]) s.add(w[o]);
    return s.value();
}

struct BestUpSet {
    double value = 0.0;
    std::vector<bool> members;
};

// Maximum of sum_{o in V} w_o over up-sets V, as a maximum-weight closure.
BestUpSet max_weight_up_set(const Poset& poset, const std::vector<double>& w) {
    using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
    struct EdgeProps {
        double capacity = 0.0;
        double residual = 0.0;
        Traits::edge_descriptor reverse;
    };
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS,
                                        boost::no_property, EdgeProps>;

    const std::size_t n = poset.size();
    Graph g(n + 2);
    const std::size_t source = n, sink = n + 1;
    double infinite = 1.0;
    for (double x : w) infinite += std::abs(x);

    auto add = [&](std::size_t from, std::size_t to, double cap) {
        auto e = boost::add_edge(from, to, g).first;
        auto r = boost::add_edge(to, from, g).first;
        g[e].capacity = cap;
        g[r].capacity = 0.0;
        g[e].reverse = r;
        g[r].reverse = e;
    };
    for (std::size_t o = 0; o < n; ++o) {
        if (w[o] > 0.0) add(source, o, w[o]);
        else if (w[o] < 0.0) add(o, sink, -w[o]);
        for (std::size_t up : poset.strictly_above(o)) add(o, up, infinite);
    }

    std::vector<Traits::edge_descriptor> pred(n + 2);
    std::vector<boost::default_color_type> color(n + 2);
    std::vector<long> distance(n + 2);
    auto index = boost::get(boost::vertex_index, g);
    boost::boykov_kolmogorov_max_flow(
        g, boost::get(&EdgeProps::capacity, g), boost::get(&EdgeProps::residual, g),
        boost::get(&EdgeProps::reverse, g), boost::make_iterator_property_map(pred.begin(), index),
        boost::make_iterator_property_map(color.begin(), index),
        boost::make_iterator_property_map(distance.begin(), index), index, source, sink);

    BestUpSet best;
    best.members.assign(n, false);
    for (std::size_t o = 0; o < n; ++o)
        best.members[o] = color[o] == boost::black_color;
    // Close upward in case the cut labelling is not already closed.
    for (std::size_t o = 0; o < n; ++o)
        if (best.members[o])
            for (std::size_t up : poset.strictly_above(o)) best.members[up] = true;
    best.value = sum_over(w, best.members);
    if (best.value < 0.0) {
        best.members.assign(n, false);
        best.value = 0.0;
    }
    return best;
}

std::vector<Point> members_as_points(const Poset& poset, const std::vector<bool>& members) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < poset.size(); ++i)
        if (members[i]) out.push_back(poset.point(i));
    return out;
}

// Searches the best up-set on the second block for each fixed indicator on
// the first block. `fixed` yields (membership over first-block points,
// threshold-or-nothing, up-set points for the witness).
struct FamilySearch {
    const DependenceOptions& opts;
    DependenceVerdict& verdict;

    // Returns true to stop (violation found).
    bool consider(const std::vector<double>& w, const Poset& second,
                  const std::vector<UpSet>* enumerated_second, DependenceWitness&& partial) {
        BestUpSet best;
        if (enumerated_second) {
            best.value = -1.0;
            for (const UpSet& v : *enumerated_second) {
                ++verdict.pairs_checked;
                const double val = sum_over(w, v.members);
                if (val > best.value) best = BestUpSet{val, v.members};
            }
            if (enumerated_second->empty()) best = BestUpSet{0.0, std::vector<bool>(second.size(), false)};
        } else {
            ++verdict.pairs_checked;
            best = max_weight_up_set(second, w);
        }
        verdict.max_value = std::max(verdict.max_value, best.value);
        if (best.value > opts.tol) {
            verdict.status = DependenceVerdict::Status::violated;
            partial.up_set_b = members_as_points(second, best.members);
            partial.value = best.value;
            verdict.witness = std::move(partial);
            return true;
        }
        return false;
    }
};

void finish(DependenceVerdict& v, double tol) {
    if (v.holds() && v.max_value > kNoiseFloor && v.max_value <= tol) v.margin_warning = true;
}

std::vector<std::size_t> complement(std::size_t m, const std::vector<std::size_t>& a) {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < m; ++c)
        if (std::find(a.begin(), a.end(), c) == a.end()) out.push_back(c);
    return out;
}

std::vector<std::size_t> suffix(std::size_t from, std::size_t m) {
    std::vector<std::size_t> out;
    for (std::size_t c = from; c < m; ++c) out.push_back(c);
    return out;
}

}  // namespace

DependenceVerdict is_na(const JointPmf& law, const DependenceOptions& opts) {
    DependenceVerdict verdict;
    const std::size_t m = law.dim();
    if (m < 2) return verdict;
    if (m > 16) fail(ErrorKind::guard_exceeded, "is_na: more than 16 coordinates");

    // Unordered bipartitions: the block containing coordinate 0 is one side.
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << m); mask += 2) {
        std::vector<std::size_t> a;
        for (std::size_t c = 0; c < m; ++c)
            if (mask >> c & 1U) a.push_back(c);
        std::vector<std::size_t> b = complement(m, a);

        Projection pa = project(law, a), pb = project(law, b);
        Poset poset_a(pa.points), poset_b(pb.points);
        // Enumerate the side with fewer up-sets.
        if (poset_b.up_set_bound() < poset_a.up_set_bound()) {
            std::swap(a, b);
            std::swap(pa, pb);
            std::swap(poset_a, poset_b);
        }
        const Rows rows = joint_rows(law, pa, pb);

        std::vector<UpSet> second_up_sets;
        const bool exhaustive = opts.search == DependenceOptions::Search::exhaustive;
        if (exhaustive) second_up_sets = enumerate_up_sets(poset_b, opts.caps);

        FamilySearch search{opts, verdict};
        bool stop = false;
        enumerate_up_sets(poset_a, opts.caps, [&](const UpSet& u) {
            if (stop) return;
            const auto w = indicator_weights(rows, u.members, pb.prob);
            DependenceWitness partial;
            partial.block_a = a;
            partial.block_b = b;
            partial.up_set_a = members_as_points(poset_a, u.members);
            stop = search.consider(w, poset_b, exhaustive ? &second_up_sets : nullptr, std::move(partial));
        });
        if (stop) break;
    }
    if (verdict.witness) verdict.witness->value = witness_covariance(law, *verdict.witness);
    finish(verdict, opts.tol);
    return verdict;
}

DependenceVerdict is_sna(const JointPmf& law, const DependenceOptions& opts) {
    DependenceVerdict verdict;
    const std::size_t m = law.dim();
    FamilySearch search{opts, verdict};
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const std::vector<std::size_t> a{i};
        const std::vector<std::size_t> b = suffix(i + 1, m);
        const Projection pa = project(law, a), pb = project(law, b);
        const Poset poset_b(pb.points);
        const Rows rows = joint_rows(law, pa, pb);
        std::vector<UpSet> second_up_sets;
        const bool exhaustive = opts.search == DependenceOptions::Search::exhaustive;
        if (exhaustive) second_up_sets = enumerate_up_sets(poset_b, opts.caps);
        else check_enumeration_caps(poset_b, opts.caps);

        // pa.points are sorted ascending; the top value gives a constant indicator.
        for (std::size_t k = 0; k + 1 < pa.points.size(); ++k) {
            const double t = pa.points[k][0];
            std::vector<bool> in_u(pa.points.size());
            for (std::size_t e = 0; e < pa.points.size(); ++e) in_u[e] = pa.points[e][0] > t;
            const auto w = indicator_weights(rows, in_u, pb.prob);
            DependenceWitness partial;
            partial.block_a = a;
            partial.block_b = b;
            partial.threshold = t;
            if (search.consider(w, poset_b, exhaustive ? &second_up_sets : nullptr, std::move(partial))) {
                verdict.witness->value = witness_covariance(law, *verdict.witness);
                finish(verdict, opts.tol);
                return verdict;
            }
        }
    }
    finish(verdict, opts.tol);
    return verdict;
}

NqdCheck is_nqd(const JointPmf& law, double tol) {
    if (law.dim() != 2) fail(ErrorKind::dimension_mismatch, "is_nqd: law must be bivariate");
    NqdCheck out;
    for (double x : law.coordinate_values(0)) {
        for (double y : law.coordinate_values(1)) {
            CompensatedSum<double> both, fx, fy;
            for (std::size_t a = 0; a < law.size(); ++a) {
                const auto p = law.point(a);
                if (p[0] <= x) fx.add(law.prob(a));
                if (p[1] <= y) fy.add(law.prob(a));
                if (p[0] <= x && p[1] <= y) both.add(law.prob(a));
            }
            const double excess = both.value() - fx.value() * fy.value();
            out.excess = std::max(out.excess, excess);
            if (excess > tol && out.holds) {
                out.holds = false;
                out.witness = std::vector<double>{x, y};
            }
        }
    }
    return out;
}

DependenceVerdict wcs_dominates(const JointPmf& x, const JointPmf& y, const DependenceOptions& opts) {
    if (x.dim() != y.dim()) fail(ErrorKind::dimension_mismatch, "wcs_dominates: dimensions differ");
    DependenceVerdict verdict;
    const std::size_t m = x.dim();
    FamilySearch search{opts, verdict};
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const std::vector<std::size_t> a{i};
        const std::vector<std::size_t> b = suffix(i + 1, m);

        std::set<Point> union_b;
        for (const JointPmf* law : {&x, &y})
            for (std::size_t k = 0; k < law->size(); ++k) union_b.insert(project_point(law->point(k), b));
        const Poset poset_b(std::vector<Point>(union_b.begin(), union_b.end()));
        std::map<Point, std::size_t> b_index;
        for (std::size_t k = 0; k < poset_b.size(); ++k) b_index[poset_b.point(k)] = k;

        std::set<double> thresholds;
        for (double v : x.coordinate_values(i)) thresholds.insert(v);
        for (double v : y.coordinate_values(i)) thresholds.insert(v);
        thresholds.erase(std::prev(thresholds.end()));

        std::vector<UpSet> second_up_sets;
        const bool exhaustive = opts.search == DependenceOptions::Search::exhaustive;
        if (exhaustive) second_up_sets = enumerate_up_sets(poset_b, opts.caps);
        else check_enumeration_caps(poset_b, opts.caps);

        auto weights = [&](const JointPmf& law, double t) {
            std::vector<double> w(poset_b.size(), 0.0), pb(poset_b.size(), 0.0);
            double pu = 0.0;
            for (std::size_t k = 0; k < law.size(); ++k) {
                const std::size_t o = b_index.at(project_point(law.point(k), b));
                pb[o] += law.prob(k);
                if (law.point(k)[i] > t) {
                    w[o] += law.prob(k);
                    pu += law.prob(k);
                }
            }
            for (std::size_t o = 0; o < w.size(); ++o) w[o] -= pu * pb[o];
            return w;
        };

        for (double t : thresholds) {
            auto wx = weights(x, t);
            const auto wy = weights(y, t);
            for (std::size_t o = 0; o < wx.size(); ++o) wx[o] -= wy[o];
            DependenceWitness partial;
            partial.block_a = a;
            partial.block_b = b;
            partial.threshold = t;
            if (search.consider(wx, poset_b, exhaustive ? &second_up_sets : nullptr, std::move(partial))) {
                finish(verdict, opts.tol);
                return verdict;
            }
        }
    }
    finish(verdict, opts.tol);
    return verdict;
}

DependenceVerdict sm_dominates_bivariate(const JointPmf& x, const JointPmf& y, double tol) {
    if (x.dim() != 2 || y.dim() != 2)
        fail(ErrorKind::dimension_mismatch, "sm_dominates_bivariate: laws must be bivariate");
    auto cdf = [](const JointPmf& law, double s, double t) {
        CompensatedSum<double> acc;
        for (std::size_t k = 0; k < law.size(); ++k)
            if (law.point(k)[0] <= s && law.point(k)[1] <= t) acc.add(law.prob(k));
        return acc.value();
    };
    std::vector<std::vector<double>> grid(2);
    for (std::size_t c = 0; c < 2; ++c) {
        std::set<double> vals;
        for (double v : x.coordinate_values(c)) vals.insert(v);
        for (double v : y.coordinate_values(c)) vals.insert(v);
        grid[c].assign(vals.begin(), vals.end());
    }
    const double inf = std::numeric_limits<double>::infinity();
    for (double s : grid[0])
        if (std::abs(cdf(x, s, inf) - cdf(y, s, inf)) > kMarginalTolerance)
            fail(ErrorKind::marginal_mismatch, "sm_dominates_bivariate: first marginals differ");
    for (double t : grid[1])
        if (std::abs(cdf(x, inf, t) - cdf(y, inf, t)) > kMarginalTolerance)
            fail(ErrorKind::marginal_mismatch, "sm_dominates_bivariate: second marginals differ");

    DependenceVerdict verdict;
    for (double s : grid[0]) {
        for (double t : grid[1]) {
            ++verdict.pairs_checked;
            const double gap = cdf(x, s, t) - cdf(y, s, t);
            verdict.max_value = std::max(verdict.max_value, gap);
            if (gap > tol && verdict.holds()) {
                verdict.status = DependenceVerdict::Status::violated;
                DependenceWitness w;
                w.block_a = {0};
                w.block_b = {1};
                w.point = {s, t};
                w.value = gap;
                verdict.witness = std::move(w);
            }
        }
    }
    finish(verdict, tol);
    return verdict;
}

double witness_covariance(const JointPmf& law, const DependenceWitness& w) {
    const std::set<Point> u(w.up_set_a.begin(), w.up_set_a.end());
    const std::set<Point> v(w.up_set_b.begin(), w.up_set_b.end());
    CompensatedSum<double> pu, pv, puv;
    for (std::size_t k = 0; k < law.size(); ++k) {
        const auto x = law.point(k);
        const bool in_u = w.threshold ? x[w.block_a.at(0)] > *w.threshold
                                      : u.count(project_point(x, w.block_a)) > 0;
        const bool in_v = v.count(project_point(x, w.block_b)) > 0;
        if (in_u) pu.add(law.prob(k));
        if (in_v) pv.add(law.prob(k));
        if (in_u && in_v) puv.add(law.prob(k));
    }
    return puv.value() - pu.value() * pv.value();
}

}  // namespace negassoc
