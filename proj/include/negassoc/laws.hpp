#pragma once

// Laws of the point count: Poisson-binomial and class-Q constructions,
// log-concavity (PF2) and ultra log-concavity predicates, conditioning on a
// total sum, and the convex order through stop-loss transforms.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "negassoc/joint_pmf.hpp"

namespace negassoc {

inline constexpr double kSumTolerance = 1e-12;
inline constexpr double kDefaultMassFloor = 1.0 - 1e-12;

/// Probability mass function on {0, ..., n}.
///
/// The last entry is the support bound n. A trailing zero is only accepted
/// when the Pmf is built as padded, which lets a law carry a declared bound
/// larger than its actual support (Poisson-binomial with a zero success
/// probability, for instance).
class Pmf {
public:
    Pmf() : probs_{1.0} {}
    explicit Pmf(std::vector<double> probs, bool padded = false);

    static Pmf point_mass(int k);
    /// Divides by the total; the total must be positive.
    static Pmf normalized(std::vector<double> weights, bool padded = false);

    int bound() const { return static_cast<int>(probs_.size()) - 1; }
    bool padded() const { return padded_; }
    std::span<const double> probs() const { return probs_; }
    double operator[](int k) const {
        return (k < 0 || k > bound()) ? 0.0 : probs_[static_cast<std::size_t>(k)];
    }

    double mean() const;
    double variance() const;
    /// Probability generating function at z.
    double pgf(double z) const;

    friend bool operator==(const Pmf&, const Pmf&) = default;

private:
    std::vector<double> probs_;
    bool padded_ = false;
};

/// A law obtained by truncating an infinite-support law at the smallest
/// bound whose retained mass reaches the floor, then renormalizing.
struct TruncatedPmf {
    Pmf pmf;
    int truncation_point = 0;
    double retained_mass = 1.0;
};

struct SequenceCheck {
    bool holds = true;
    std::optional<int> first_violation;
};

SequenceCheck is_pf2(const Pmf& p);
SequenceCheck is_ulc(const Pmf& p);

Pmf poisson_binomial(std::span<const double> ps);
Pmf convolve(const Pmf& p, const Pmf& q);

TruncatedPmf truncated_poisson(double lambda, double mass_floor = kDefaultMassFloor);
TruncatedPmf truncated_geometric(double success, double mass_floor = kDefaultMassFloor);
Pmf binomial(int n, double p);

/// Poisson(lambda) convolved with the Poisson-binomial law of ps, truncated
/// at the first bound reaching mass_floor.
TruncatedPmf class_q_pmf(double lambda, std::span<const double> ps,
                         double mass_floor = kDefaultMassFloor);

/// Conditional law of (S_1, ..., S_n) given S_0 + ... + S_n = s for
/// independent S_i; laws[0] is the law of S_0. Zero-weight atoms are dropped.
JointPmf condition_n_joint(std::span<const Pmf> laws, int s);

struct EfronCheck {
    bool holds = true;
    std::optional<std::pair<int, int>> violating_pair;
    std::vector<int> sums;
    std::vector<double> conditional_means;
};

using MonotoneFunction = std::function<double(std::span<const int>)>;

/// E(phi(X) | sum X = s) for independent X_i ~ laws[i], over every
/// reachable s; holds iff the sequence is non-decreasing within 1e-10.
EfronCheck efron_monotone_check(std::span<const Pmf> laws, const MonotoneFunction& phi);

double stop_loss(const Pmf& p, double k);

struct CxCheck {
    bool holds = true;
    std::optional<int> witness;
    double mean_gap = 0.0;
    /// min over k of stop_loss(q, k) - stop_loss(p, k).
    double min_stop_loss_gap = 0.0;
};

/// p <=cx q: equal means within 1e-9 and stop-loss dominance at every
/// integer in the union of supports.
CxCheck cx_dominates(const Pmf& p, const Pmf& q);

}  // namespace negassoc
