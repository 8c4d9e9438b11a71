#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace negassoc {

/// Finite set of distinct points under the componentwise partial order.
class Poset {
public:
    using Point = std::vector<double>;

    explicit Poset(std::vector<Point> points);

    std::size_t size() const { return points_.size(); }
    const Point& point(std::size_t i) const { return points_[i]; }
    const std::vector<Point>& points() const { return points_; }
    /// Indices of points strictly above point i.
    const std::vector<std::size_t>& strictly_above(std::size_t i) const { return above_[i]; }
    bool leq(std::size_t a, std::size_t b) const;

    /// Upper bound on the number of up-sets from a greedy chain partition:
    /// prod (chain length + 1). Saturates at SIZE_MAX.
    std::size_t up_set_bound() const;

private:
    std::vector<Point> points_;
    std::vector<std::vector<std::size_t>> above_;
};

/// Membership flags over the points of a Poset, closed upward.
struct UpSet {
    std::vector<bool> members;

    bool contains(std::size_t i) const { return members[i]; }
    std::size_t count() const;
};

struct EnumerationCaps {
    std::size_t max_points = 24;
    std::size_t max_up_sets = 1'000'000;
    /// Hard stop on the number of up-sets actually emitted.
    std::size_t max_emitted = std::size_t{1} << 24;
};

/// Throws guard_exceeded unless the poset has at most max_points points or
/// its chain-partition bound is at most max_up_sets.
void check_enumeration_caps(const Poset& poset, const EnumerationCaps& caps);

/// Visits every up-set except the empty one and the full one, each exactly
/// once, in a deterministic order. Returns the number visited.
std::size_t enumerate_up_sets(const Poset& poset, const EnumerationCaps& caps,
                              const std::function<void(const UpSet&)>& visit);

std::vector<UpSet> enumerate_up_sets(const Poset& poset, const EnumerationCaps& caps = {});

}  // namespace negassoc
