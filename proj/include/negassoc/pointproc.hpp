#pragma once

// Finite point processes observed through a fixed partition of the state
// space: mixed sampled processes (a random number tau of iid points) and
// determinantal processes on a finite ground set whose points carry cell
// labels. Everything downstream consumes the joint law of the cell counts.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "negassoc/joint_pmf.hpp"
#include "negassoc/laws.hpp"
#include "negassoc/multiaffine.hpp"
#include "negassoc/rng.hpp"

namespace negassoc {

/// Cell probabilities q_i of the tracked cells; 1 - sum q_i goes to an
/// untracked remainder cell.
class PartitionModel {
public:
    explicit PartitionModel(std::vector<double> q);

    std::size_t cells() const { return q_.size(); }
    const std::vector<double>& q() const { return q_; }
    double remainder() const { return remainder_; }

private:
    std::vector<double> q_;
    double remainder_ = 0.0;
};

struct MixedSampledProcess {
    Pmf tau;
    PartitionModel partition;
    /// Mass kept when tau was truncated from an infinite-support law.
    double tau_retained_mass = 1.0;
};

/// Symmetric kernel on a finite ground set plus the cell of each ground
/// point; a cell of -1 leaves the point untracked.
struct DppModel {
    Eigen::MatrixXd kernel;
    std::vector<int> cell_of;

    std::size_t ground_size() const { return static_cast<std::size_t>(kernel.rows()); }
    std::size_t cells() const;
};

struct CountVectorLaw {
    JointPmf law;
    double truncation_mass = 1.0;
};

inline constexpr std::size_t kMaxCells = 6;
inline constexpr int kMaxTauBound = 30;
inline constexpr std::size_t kMaxDppExactGround = 12;

CountVectorLaw exact_count_law(const MixedSampledProcess& p);

/// Caches the inverse-cdf tables of a mixed sampled process.
class MixedSampler {
public:
    explicit MixedSampler(const MixedSampledProcess& p);
    std::vector<int> operator()(Stream& stream) const;

private:
    std::vector<double> tau_cdf_;
    std::vector<double> cell_cdf_;  // tracked cells, then the remainder
    std::size_t cells_;
};

std::vector<int> sample_mixed(const MixedSampledProcess& p, Stream& stream);

/// Law of Z_1 + ... + Z_tau for iid marks with at most one strictly positive
/// coordinate per support vector. Coordinates are merged on a 1e-9 grid.
JointPmf marked_sum_law(const Pmf& tau, const JointPmf& mark_law);

struct DppDiagnostics {
    double symmetry_defect = 0.0;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    std::vector<double> eigenvalues;
    std::vector<std::string> failures;

    bool pass() const { return failures.empty(); }
};

DppDiagnostics dpp_validate(const DppModel& d);

struct DppSubsetLaw {
    SubsetMeasure law;
    /// Largest negative round-off clipped to zero before renormalizing.
    double clip_magnitude = 0.0;
};

/// P(eta = S) = |det(K - I_{S^c})| for every subset S of the ground set.
DppSubsetLaw dpp_exact_law(const DppModel& d);
CountVectorLaw dpp_count_law(const DppModel& d);

/// Joint law of the membership indicators of a subset law.
JointPmf subset_indicator_law(const SubsetMeasure& m);

/// Spectral sampler: keeps eigenvector j with probability lambda_j, then
/// draws points one at a time from the projection kernel of the kept span.
class DppSampler {
public:
    explicit DppSampler(const DppModel& d);
    std::vector<int> operator()(Stream& stream) const;
    /// Per-cell counts of a sampled subset.
    std::vector<int> counts(const std::vector<int>& subset) const;

private:
    Eigen::MatrixXd eigenvectors_;
    Eigen::VectorXd eigenvalues_;
    std::vector<int> cell_of_;
    std::size_t cells_;
};

std::vector<int> dpp_sample(const DppModel& d, Stream& stream);

std::vector<double> intensity(const CountVectorLaw& law);

}  // namespace negassoc
