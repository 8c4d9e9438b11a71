#include "negassoc/joint_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "negassoc/error.hpp"
#include "negassoc/laws.hpp"
#include "negassoc/numeric.hpp"

namespace negassoc {

JointPmf::JointPmf(std::size_t dim, std::vector<Point> support, std::vector<double> probs)
    : dim_(dim), probs_(std::move(probs)) {
    if (dim_ == 0) fail(ErrorKind::dimension_mismatch, "JointPmf: dimension must be positive");
    if (support.size() != probs_.size())
        fail(ErrorKind::dimension_mismatch, "JointPmf: support and probabilities differ in length");
    if (support.empty()) fail(ErrorKind::empty_event, "JointPmf: empty support");

    coords_.reserve(support.size() * dim_);
    for (const auto& p : support) {
        if (p.size() != dim_)
            fail(ErrorKind::dimension_mismatch,
                 "JointPmf: support vector of dimension " + std::to_string(p.size()) +
                     ", expected " + std::to_string(dim_));
        coords_.insert(coords_.end(), p.begin(), p.end());
    }

    CompensatedSum<double> total;
    for (double w : probs_) {
        if (!(w >= 0.0) || !std::isfinite(w))
            fail(ErrorKind::domain, "JointPmf: probabilities must be finite and non-negative");
        total.add(w);
    }
    if (std::abs(total.value() - 1.0) > kSumTolerance)
        fail(ErrorKind::domain, "JointPmf: probabilities sum to " + std::to_string(total.value()));

    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (support[order[i]] == support[order[i - 1]])
            fail(ErrorKind::precondition, "JointPmf: duplicate support vector");
}

JointPmf JointPmf::from_weights(std::size_t dim, const std::map<Point, double>& weights,
                                bool normalize) {
    std::vector<Point> support;
    std::vector<double> probs;
    CompensatedSum<double> total;
    for (const auto& [pt, w] : weights) {
        if (w == 0.0) continue;
        support.push_back(pt);
        probs.push_back(w);
        total.add(w);
    }
    if (normalize) {
        const double t = total.value();
        if (!(t > 0.0)) fail(ErrorKind::empty_event, "JointPmf: total weight is zero");
        for (double& w : probs) w /= t;
    }
    return JointPmf(dim, std::move(support), std::move(probs));
}

JointPmf JointPmf::independent(std::span<const Pmf> marginals) {
    const std::size_t dim = marginals.size();
    if (dim == 0) fail(ErrorKind::dimension_mismatch, "independent: no marginals");
    std::vector<Point> support{Point{}};
    std::vector<double> probs{1.0};
    for (const Pmf& m : marginals) {
        std::vector<Point> next_support;
        std::vector<double> next_probs;
        for (std::size_t a = 0; a < support.size(); ++a) {
            for (int k = 0; k <= m.bound(); ++k) {
                if (m[k] == 0.0) continue;
                Point pt = support[a];
                pt.push_back(static_cast<double>(k));
                next_support.push_back(std::move(pt));
                next_probs.push_back(probs[a] * m[k]);
            }
        }
        support = std::move(next_support);
        probs = std::move(next_probs);
    }
    return JointPmf(dim, std::move(support), std::move(probs));
}

JointPmf JointPmf::marginal(std::span<const std::size_t> coords) const {
    if (coords.empty()) fail(ErrorKind::dimension_mismatch, "marginal: no coordinates");
    std::map<Point, double> acc;
    for (std::size_t i = 0; i < size(); ++i) {
        Point pt;
        pt.reserve(coords.size());
        for (std::size_t c : coords) {
            if (c >= dim_) fail(ErrorKind::index_out_of_range, "marginal: coordinate out of range");
            pt.push_back(point(i)[c]);
        }
        acc[pt] += probs_[i];
    }
    std::vector<Point> support;
    std::vector<double> probs;
    for (auto& [pt, w] : acc) {
        support.push_back(pt);
        probs.push_back(w);
    }
    return JointPmf(coords.size(), std::move(support), std::move(probs));
}

Pmf JointPmf::coordinate_pmf(std::size_t coord) const {
    if (coord >= dim_) fail(ErrorKind::index_out_of_range, "coordinate_pmf: coordinate out of range");
    int top = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        const double v = point(i)[coord];
        if (v < 0 || v != std::floor(v))
            fail(ErrorKind::domain, "coordinate_pmf: coordinate is not a non-negative integer");
        top = std::max(top, static_cast<int>(v));
    }
    std::vector<double> probs(static_cast<std::size_t>(top) + 1, 0.0);
    for (std::size_t i = 0; i < size(); ++i)
        probs[static_cast<std::size_t>(point(i)[coord])] += probs_[i];
    return Pmf::normalized(std::move(probs), true);
}

std::vector<double> JointPmf::coordinate_values(std::size_t coord) const {
    std::vector<double> vals;
    vals.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) vals.push_back(point(i)[coord]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

double JointPmf::mean(std::size_t coord) const {
    if (coord >= dim_) fail(ErrorKind::index_out_of_range, "mean: coordinate out of range");
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < size(); ++i) s.add(probs_[i] * point(i)[coord]);
    return s.value();
}

double JointPmf::expectation(const std::function<double(std::span<const double>)>& f) const {
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < size(); ++i) s.add(probs_[i] * f(point(i)));
    return s.value();
}

JointPmf JointPmf::product_of_marginals() const {
    JointPmf acc;
    for (std::size_t c = 0; c < dim_; ++c) {
        const std::size_t coords[] = {c};
        JointPmf m = marginal(coords);
        acc = c == 0 ? std::move(m) : independent_concat(acc, m);
    }
    return acc;
}

JointPmf independent_concat(const JointPmf& a, const JointPmf& b) {
    std::vector<JointPmf::Point> support;
    std::vector<double> probs;
    support.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            JointPmf::Point pt(a.point(i).begin(), a.point(i).end());
            pt.insert(pt.end(), b.point(j).begin(), b.point(j).end());
            support.push_back(std::move(pt));
            probs.push_back(a.prob(i) * b.prob(j));
        }
    }
    return JointPmf(a.dim() + b.dim(), std::move(support), std::move(probs));
}

}  // namespace negassoc
