#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace negassoc {

class Pmf;

/// Exact joint law of a random vector on an explicit finite support.
///
/// Coordinates are doubles so that both count vectors and finite real grids
/// (marked sums) fit; integer-valued laws simply store whole numbers.
class JointPmf {
public:
    using Point = std::vector<double>;

    JointPmf() = default;
    JointPmf(std::size_t dim, std::vector<Point> support, std::vector<double> probs);

    /// Builds a law from accumulated weights, optionally rescaling them to sum
    /// to one. Atoms with zero weight are dropped.
    static JointPmf from_weights(std::size_t dim, const std::map<Point, double>& weights,
                                 bool normalize = false);
    /// Independent coordinates with the given marginals.
    static JointPmf independent(std::span<const Pmf> marginals);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return probs_.size(); }
    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    double prob(std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const { return probs_; }

    /// Law of the listed coordinates, in the listed order.
    JointPmf marginal(std::span<const std::size_t> coords) const;
    /// Law of a single integer-valued, non-negative coordinate.
    Pmf coordinate_pmf(std::size_t coord) const;
    /// Distinct values taken by a coordinate, ascending.
    std::vector<double> coordinate_values(std::size_t coord) const;

    double mean(std::size_t coord) const;
    double expectation(const std::function<double(std::span<const double>)>& f) const;

    /// Same marginals, independent coordinates.
    JointPmf product_of_marginals() const;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<double> probs_;
};

/// Law of (X, Y) for independent X ~ a and Y ~ b.
JointPmf independent_concat(const JointPmf& a, const JointPmf& b);

}  // namespace negassoc
