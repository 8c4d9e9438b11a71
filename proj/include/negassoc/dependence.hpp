#pragma once

// Negative dependence checks on finite joint laws.
//
// Every non-decreasing function on a finite poset is a constant plus a
// non-negative combination of up-set indicators, and covariance is bilinear,
// so NA, sNA and the wcs order reduce to covariances of up-set indicator
// pairs. One side of each pair is enumerated; the best up-set on the other
// side maximizes a linear functional over up-sets, which is a maximum-weight
// closure and is solved exactly by a minimum cut. Search::exhaustive
// enumerates both sides instead.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "negassoc/joint_pmf.hpp"
#include "negassoc/upsets.hpp"

namespace negassoc {

struct DependenceOptions {
    enum class Search { closure, exhaustive };

    double tol = 1e-10;
    EnumerationCaps caps{};
    Search search = Search::closure;
};

struct DependenceWitness {
    std::vector<std::size_t> block_a;
    std::vector<std::size_t> block_b;
    /// Set for sNA / wcs witnesses: the first block is {X_i > threshold}.
    std::optional<double> threshold;
    /// Points (in block_a coordinates) of the up-set on the first block; empty
    /// when a threshold is used.
    std::vector<std::vector<double>> up_set_a;
    std::vector<std::vector<double>> up_set_b;
    /// Cdf-based witnesses (NQD, supermodular order) report the grid point.
    std::vector<double> point;
    double value = 0.0;
};

struct DependenceVerdict {
    enum class Status { holds, violated };

    Status status = Status::holds;
    std::optional<DependenceWitness> witness;
    std::size_t pairs_checked = 0;
    /// Largest covariance (or covariance gap) seen.
    double max_value = 0.0;
    /// holds, but some covariance landed in (0, tol].
    bool margin_warning = false;

    bool holds() const { return status == Status::holds; }
};

DependenceVerdict is_na(const JointPmf& law, const DependenceOptions& opts = {});
DependenceVerdict is_sna(const JointPmf& law, const DependenceOptions& opts = {});

struct NqdCheck {
    bool holds = true;
    std::optional<std::vector<double>> witness;
    double excess = 0.0;
};

NqdCheck is_nqd(const JointPmf& law, double tol = 1e-10);

/// Cov(1{X_i>t}, 1_V(X suffix)) <= Cov(1{Y_i>t}, 1_V(Y suffix)) + tol for all
/// i, t and up-sets V over the union of suffix supports.
DependenceVerdict wcs_dominates(const JointPmf& x, const JointPmf& y,
                                const DependenceOptions& opts = {});

/// Bivariate supermodular order for equal marginals: F_X <= F_Y + tol.
DependenceVerdict sm_dominates_bivariate(const JointPmf& x, const JointPmf& y, double tol = 1e-10);

/// Recomputes the covariance a NA or sNA witness reports, directly from the law.
double witness_covariance(const JointPmf& law, const DependenceWitness& w);

}  // namespace negassoc
