#pragma once

// Measures on subsets of a finite ground set, read as multi-affine generating
// polynomials P(z) = sum_S mu(S) prod_{i in S} z_i. Subsets are bitmasks with
// bit i standing for element i (0-based).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "negassoc/error.hpp"
#include "negassoc/numeric.hpp"
#include "negassoc/sturm.hpp"

namespace negassoc {

class Pmf;

using Extended = boost::multiprecision::cpp_bin_float_50;

inline constexpr int kMaxGroundSet = 20;

class SubsetMeasure {
public:
    enum class Mode { probability, polynomial };
    using Mask = std::uint32_t;

    SubsetMeasure(int n, std::vector<double> coeffs, Mode mode = Mode::probability);
    static SubsetMeasure from_entries(int n, std::span<const std::pair<Mask, double>> entries,
                                      Mode mode = Mode::probability);

    int n() const { return n_; }
    Mode mode() const { return mode_; }
    std::size_t size() const { return coeffs_.size(); }
    double operator[](Mask s) const { return coeffs_[s]; }
    std::span<const double> coeffs() const { return coeffs_; }

private:
    int n_;
    std::vector<double> coeffs_;
    Mode mode_;
};

template <typename T>
T evaluate(const SubsetMeasure& m, std::span<const T> x) {
    if (static_cast<int>(x.size()) != m.n())
        fail(ErrorKind::dimension_mismatch, "evaluate: point dimension differs from ground set");
    CompensatedSum<T> sum;
    for (SubsetMeasure::Mask s = 0; s < m.size(); ++s) {
        if (m[s] == 0.0) continue;
        T term(m[s]);
        for (int i = 0; i < m.n(); ++i)
            if (s >> i & 1U) term *= x[static_cast<std::size_t>(i)];
        sum.add(term);
    }
    return sum.value();
}

inline double evaluate(const SubsetMeasure& m, std::span<const double> x) {
    return evaluate<double>(m, x);
}

SubsetMeasure partial_derivative(const SubsetMeasure& m, int i);

/// Measure on the ground set without element i, obtained by setting z_i = 1.
SubsetMeasure contract(const SubsetMeasure& m, int i);

/// Level sums: coefficient k is the total mass on subsets of size k, i.e. the
/// coefficients of P(z, ..., z).
std::vector<double> diagonal_coefficients(const SubsetMeasure& m);

/// d_iP(x) d_jP(x) - P(x) d_ijP(x). Writing P = A + z_i B + z_j C + z_i z_j D
/// with A..D free of z_i, z_j, the slack equals BC - AD evaluated at x.
template <typename T>
T rayleigh_at(const SubsetMeasure& m, std::span<const T> x, int i, int j) {
    const int n = m.n();
    if (static_cast<int>(x.size()) != n)
        fail(ErrorKind::dimension_mismatch, "rayleigh_at: point dimension differs from ground set");
    if (i < 0 || j < 0 || i >= n || j >= n)
        fail(ErrorKind::index_out_of_range, "rayleigh_at: index out of range");
    if (i == j) fail(ErrorKind::index_out_of_range, "rayleigh_at: indices must differ");

    std::vector<T> arr(m.coeffs().begin(), m.coeffs().end());
    for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const SubsetMeasure::Mask bit = 1U << k;
        const T xk = x[static_cast<std::size_t>(k)];
        for (SubsetMeasure::Mask s = 0; s < arr.size(); ++s)
            if (!(s & bit)) arr[s] += xk * arr[s | bit];
    }
    const SubsetMeasure::Mask bi = 1U << i, bj = 1U << j;
    return arr[bi] * arr[bj] - arr[0] * arr[bi | bj];
}

/// Coefficients (lowest degree first) of t -> P(a + t b).
template <typename T>
std::vector<T> line_polynomial(const SubsetMeasure& m, std::span<const double> a,
                               std::span<const double> b) {
    const int n = m.n();
    if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
        fail(ErrorKind::dimension_mismatch, "line_polynomial: dimension mismatch");
    // Fold the highest remaining variable each round; after r rounds entry s
    // holds a polynomial of degree <= r in t.
    std::vector<std::vector<T>> polys(m.size());
    for (std::size_t s = 0; s < m.size(); ++s) polys[s] = {T(m.coeffs()[s])};
    for (int k = n - 1; k >= 0; --k) {
        const std::size_t half = std::size_t{1} << k;
        const T ak(a[static_cast<std::size_t>(k)]);
        const T bk(b[static_cast<std::size_t>(k)]);
        for (std::size_t s = 0; s < half; ++s) {
            const auto& hi = polys[s | half];
            auto& lo = polys[s];
            lo.resize(std::max(lo.size(), hi.size() + 1), T(0));
            for (std::size_t d = 0; d < hi.size(); ++d) {
                lo[d] += ak * hi[d];
                lo[d + 1] += bk * hi[d];
            }
        }
        polys.resize(half);
    }
    return polys[0];
}

struct PairWitness {
    std::vector<double> x;
    int i = 0;
    int j = 0;
    double slack = 0.0;           // double-precision evaluation
    double verified_slack = 0.0;  // extended-precision re-evaluation
};

struct LineWitness {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> coefficients;
    int distinct_real = 0;
    int distinct_total = 0;
};

struct StabilityVerdict {
    enum class Status { violated, no_violation_found };

    Status status = Status::no_violation_found;
    std::optional<PairWitness> pair_witness;
    std::optional<LineWitness> line_witness;
    std::size_t grid_trials = 0;
    std::size_t line_trials = 0;
    std::size_t ambiguous_trials = 0;

    bool violated() const { return status == Status::violated; }
};

struct StabilityOptions {
    double lower = 0.0;
    double upper = 5.0;
    std::size_t points_per_pair = 10'000;
    std::size_t lines = 1'000;
    double tol = 1e-10;
    std::uint64_t seed = 0;

    static StabilityOptions rayleigh_defaults() { return {}; }
    static StabilityOptions strongly_rayleigh_defaults() {
        StabilityOptions o;
        o.lower = -5.0;
        return o;
    }
};

/// Pairwise Rayleigh inequality on the non-negative orthant: deterministic
/// lattice plus seeded random points for every pair i < j.
StabilityVerdict is_rayleigh(const SubsetMeasure& m,
                             const StabilityOptions& opts = StabilityOptions::rayleigh_defaults());

/// Randomized falsification of real stability: the Rayleigh inequality on a
/// grid over all of R^n, then real-rootedness of P(a + t b) along seeded lines
/// with b > 0. A violation is only reported after re-verification in extended
/// precision; no-violation-found is never a proof.
StabilityVerdict is_strongly_rayleigh(
    const SubsetMeasure& m,
    const StabilityOptions& opts = StabilityOptions::strongly_rayleigh_defaults());

double elementary_symmetric(std::span<const double> values, int k);

/// Exchangeable lift of a count law: mu(S) = P(tau = |S|) / C(n, |S|).
SubsetMeasure polarize(const Pmf& tau);

/// Sturm count for sum_k p_k z^k; guard-band cases are redone in extended
/// precision.
RootednessResult generating_polynomial_real_rootedness(const Pmf& p);

SubsetMeasure product_measure(std::span<const double> ps);

}  // namespace negassoc
