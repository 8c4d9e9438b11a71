#include "negassoc/upsets.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "negassoc/error.hpp"

namespace negassoc {

namespace {

bool point_leq(const Poset::Point& a, const Poset::Point& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] > b[k]) return false;
    return true;
}

double coordinate_sum(const Poset::Point& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

}  // namespace

Poset::Poset(std::vector<Point> points) : points_(std::move(points)) {
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (points_[i].size() != points_[0].size())
            fail(ErrorKind::dimension_mismatch, "Poset: points of different dimension");
    above_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = 0; j < points_.size(); ++j)
            if (i != j && point_leq(points_[i], points_[j])) {
                if (points_[i] == points_[j]) fail(ErrorKind::precondition, "Poset: duplicate point");
                above_[i].push_back(j);
            }
}

bool Poset::leq(std::size_t a, std::size_t b) const { return point_leq(points_[a], points_[b]); }

std::size_t Poset::up_set_bound() const {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return coordinate_sum(points_[a]) < coordinate_sum(points_[b]);
    });
    std::vector<std::size_t> tails, lengths;
    for (std::size_t idx : order) {
        bool placed = false;
        for (std::size_t c = 0; c < tails.size(); ++c) {
            if (leq(tails[c], idx)) {
                tails[c] = idx;
                ++lengths[c];
                placed = true;
                break;
            }
        }
        if (!placed) {
            tails.push_back(idx);
            lengths.push_back(1);
        }
    }
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
    std::size_t bound = 1;
    for (std::size_t len : lengths) {
        if (bound > kMax / (len + 1)) return kMax;
        bound *= len + 1;
    }
    return bound;
}

std::size_t UpSet::count() const { return static_cast<std::size_t>(std::count(members.begin(), members.end(), true)); }

void check_enumeration_caps(const Poset& poset, const EnumerationCaps& caps) {
    if (poset.size() <= caps.max_points) return;
    const std::size_t bound = poset.up_set_bound();
    if (bound <= caps.max_up_sets) return;
    fail(ErrorKind::guard_exceeded,
         "up-set enumeration refused: poset has " + std::to_string(poset.size()) +
             " points (cap " + std::to_string(caps.max_points) + ") and chain bound " +
             std::to_string(bound) + " up-sets (cap " + std::to_string(caps.max_up_sets) + ")");
}

std::size_t enumerate_up_sets(const Poset& poset, const EnumerationCaps& caps,
                              const std::function<void(const UpSet&)>& visit) {
    check_enumeration_caps(poset, caps);
    const std::size_t n = poset.size();
    // Points in decreasing coordinate sum: everything strictly above a point
    // is decided before the point itself.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return coordinate_sum(poset.point(a)) > coordinate_sum(poset.point(b));
    });

    UpSet cur{std::vector<bool>(n, false)};
    std::size_t emitted = 0;
    std::size_t included = 0;
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == n) {
            if (included == 0 || included == n) return;
            if (++emitted > caps.max_emitted)
                fail(ErrorKind::guard_exceeded,
                     "up-set enumeration exceeded " + std::to_string(caps.max_emitted) + " up-sets");
            visit(cur);
            return;
        }
        const std::size_t p = order[pos];
        // Include first so that larger up-sets come out first.
        const auto& above = poset.strictly_above(p);
        const bool can_include =
            std::all_of(above.begin(), above.end(), [&](std::size_t q) { return cur.members[q]; });
        if (can_include) {
            cur.members[p] = true;
            ++included;
            self(self, pos + 1);
            cur.members[p] = false;
            --included;
        }
        self(self, pos + 1);
    };
    rec(rec, 0);
    return emitted;
}

std::vector<UpSet> enumerate_up_sets(const Poset& poset, const EnumerationCaps& caps) {
    std::vector<UpSet> out;
    enumerate_up_sets(poset, caps, [&](const UpSet& u) { out.push_back(u); });
    return out;
}

}  // namespace negassoc
