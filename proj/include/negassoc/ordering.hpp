#pragma once

// Consequences of directionally convex domination by a Poisson process,
// checked on exact count laws: moment-measure factorization, void
// probabilities, Laplace functionals and convex order of cell counts.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "negassoc/laws.hpp"
#include "negassoc/pointproc.hpp"

namespace negassoc {

inline constexpr double kBoundTolerance = 1e-10;

struct BoundReport {
    enum class Status { holds, violated };

    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    Status status = Status::holds;
    /// Named inputs that reproduce lhs and rhs.
    std::map<std::string, std::vector<double>> context;

    bool holds() const { return status == Status::holds; }
};

/// Fills slack and status from lhs <= rhs with the given tolerance.
BoundReport make_report(std::string name, double lhs, double rhs, double tol = kBoundTolerance);

/// E prod counts <= prod E counts.
BoundReport moment_factorization_check(const CountVectorLaw& law);

/// P(counts in the subset all vanish) <= exp(-sum of their means).
BoundReport void_bound_check(const CountVectorLaw& law, const std::vector<std::size_t>& cells);

enum class LaplaceSign { negative, positive };

/// negative: E exp(-sum h_i N_i) <= exp(sum (e^{-h_i} - 1) mean_i)
/// positive: E exp(+sum h_i N_i) <= exp(sum (e^{h_i} - 1) mean_i)
BoundReport laplace_bound_check(const CountVectorLaw& law, const std::vector<double>& h,
                                LaplaceSign sign);

struct SuperadditivityReport {
    BoundReport void_product;
    /// min over the grid of phi(s + t) - phi(s) - phi(t), phi(s) = -log P_tau(1 - s).
    double min_phi_gap = 0.0;
    std::size_t grid_points = 0;
    bool phi_superadditive = true;

    bool holds() const { return void_product.holds() && phi_superadditive; }
};

/// Binomial(n, p) mixed sampled process, disjoint cells with masses qb, qb2.
SuperadditivityReport binomial_void_superadditivity(int n, double p, double qb, double qb2,
                                                    std::size_t grid = 41,
                                                    double phi_tol = 1e-12);

struct CxMarginalCheck {
    std::vector<std::size_t> cells;
    double mean = 0.0;
    CxCheck result;
};

struct DominationReport {
    std::vector<CxMarginalCheck> cx;
    std::vector<BoundReport> void_bounds;
    BoundReport moment;
    std::vector<BoundReport> laplace;
    std::vector<double> intensity;
    double truncation_mass = 1.0;

    bool cx_pass() const;
    bool void_pass() const;
    bool laplace_pass() const;
    bool pass() const { return cx_pass() && void_pass() && moment.holds() && laplace_pass(); }
};

using ProcessModel = std::variant<MixedSampledProcess, DppModel>;

CountVectorLaw count_law(const ProcessModel& p);

/// Default Laplace grid: h_i in {0, 1/4, 1/2, 1, 2} for every cell,
/// deterministically thinned to at most 200 vectors.
std::vector<std::vector<double>> default_laplace_grid(std::size_t cells);

/// Compares the count law with the Poisson process of the same intensity:
/// cx order of every union of cells against the matching (truncated) Poisson
/// law, void bounds on every non-empty cell subset, moment factorization and
/// the negative Laplace bound on the default h grid.
DominationReport poisson_domination_report(const CountVectorLaw& law,
                                           double mass_floor = kDefaultMassFloor);
DominationReport poisson_domination_report(const ProcessModel& p,
                                           double mass_floor = kDefaultMassFloor);

}  // namespace negassoc
