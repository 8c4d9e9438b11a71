#include "negassoc/multiaffine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "negassoc/laws.hpp"
#include "negassoc/rng.hpp"
#include "negassoc/sturm.hpp"

namespace negassoc {

namespace {

using Mask = SubsetMeasure::Mask;

void check_ground_set(int n, const char* who) {
    if (n < 0) fail(ErrorKind::domain, std::string(who) + ": negative ground-set size");
    if (n > kMaxGroundSet)
        fail(ErrorKind::guard_exceeded,
             std::string(who) + ": ground set of size " + std::to_string(n) + " exceeds the cap of 20");
}

constexpr double kDoubleZero = 1e-11;
constexpr double kDoubleBand = 1e-6;
const Extended kExtendedZero("1e-35");
const Extended kExtendedBand("1e-25");

constexpr std::uint64_t kLineStreamBase = std::uint64_t{1} << 32;

// Lattice points first, then seeded random points; calls visit(x) until it
// returns false. Returns the number of points visited.
template <typename Visit>
std::size_t scan_pair(int n, int i, int j, std::size_t pair_index, const StabilityOptions& opts,
                      bool gaussian_signed, Visit visit) {
    const int others = n - 2;
    const std::size_t lattice_budget = opts.points_per_pair / 2;
    std::size_t per_axis = 1;
    std::size_t lattice_points = 1;
    if (others > 0) {
        per_axis = static_cast<std::size_t>(
            std::floor(std::pow(static_cast<double>(lattice_budget), 1.0 / others)));
        per_axis = std::max<std::size_t>(per_axis, 2);
        lattice_points = 1;
        for (int k = 0; k < others; ++k) {
            lattice_points *= per_axis;
            if (lattice_points > lattice_budget) break;
        }
        if (lattice_points > lattice_budget) lattice_points = 0;  // too many axes: random only
    }

    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    std::size_t visited = 0;
    std::vector<int> free_axes;
    for (int k = 0; k < n; ++k)
        if (k != i && k != j) free_axes.push_back(k);

    for (std::size_t idx = 0; idx < lattice_points && visited < opts.points_per_pair; ++idx) {
        std::size_t rest = idx;
        for (int k : free_axes) {
            const std::size_t step = rest % per_axis;
            rest /= per_axis;
            x[static_cast<std::size_t>(k)] =
                per_axis == 1 ? opts.lower
                              : opts.lower + (opts.upper - opts.lower) * static_cast<double>(step) /
                                                 static_cast<double>(per_axis - 1);
        }
        x[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(j)] = 0.0;
        ++visited;
        if (!visit(x)) return visited;
    }

    Stream stream(opts.seed, pair_index);
    while (visited < opts.points_per_pair) {
        const bool scatter = visited % 2 == 1;
        for (double& v : x) {
            if (scatter) {
                const double g = stream.normal();
                v = gaussian_signed ? g : std::abs(g);
            } else {
                v = stream.uniform(opts.lower, opts.upper);
            }
        }
        ++visited;
        if (!visit(x)) return visited;
    }
    return visited;
}

void rayleigh_grid(const SubsetMeasure& m, const StabilityOptions& opts, bool signed_scatter,
                   StabilityVerdict& out) {
    const int n = m.n();
    std::size_t pair_index = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++pair_index) {
            out.grid_trials += scan_pair(n, i, j, pair_index, opts, signed_scatter,
                                         [&](const std::vector<double>& x) {
                const double slack = rayleigh_at<double>(m, x, i, j);
                if (!(slack < -opts.tol)) return true;
                std::vector<Extended> xe(x.begin(), x.end());
                const Extended verified = rayleigh_at<Extended>(m, xe, i, j);
                if (!(verified < Extended(-opts.tol))) {
                    ++out.ambiguous_trials;
                    return true;
                }
                out.status = StabilityVerdict::Status::violated;
                out.pair_witness = PairWitness{x, i, j, slack, static_cast<double>(verified)};
                return false;
            });
            if (out.violated()) return;
        }
    }
}

}  // namespace

SubsetMeasure::SubsetMeasure(int n, std::vector<double> coeffs, Mode mode)
    : n_(n), coeffs_(std::move(coeffs)), mode_(mode) {
    check_ground_set(n, "SubsetMeasure");
    if (coeffs_.size() != (std::size_t{1} << n))
        fail(ErrorKind::dimension_mismatch, "SubsetMeasure: expected 2^n coefficients");
    CompensatedSum<double> total;
    for (double c : coeffs_) {
        if (!(c >= 0.0) || !std::isfinite(c))
            fail(ErrorKind::domain, "SubsetMeasure: coefficients must be finite and non-negative");
        total.add(c);
    }
    if (mode_ == Mode::probability && std::abs(total.value() - 1.0) > kSumTolerance)
        fail(ErrorKind::domain, "SubsetMeasure: coefficients sum to " + std::to_string(total.value()));
}

SubsetMeasure SubsetMeasure::from_entries(int n, std::span<const std::pair<Mask, double>> entries,
                                          Mode mode) {
    check_ground_set(n, "SubsetMeasure");
    std::vector<double> coeffs(std::size_t{1} << n, 0.0);
    for (const auto& [mask, w] : entries) {
        if (mask >= coeffs.size())
            fail(ErrorKind::index_out_of_range, "SubsetMeasure: bitmask outside the ground set");
        coeffs[mask] += w;
    }
    return SubsetMeasure(n, std::move(coeffs), mode);
}

SubsetMeasure partial_derivative(const SubsetMeasure& m, int i) {
    if (i < 0 || i >= m.n()) fail(ErrorKind::index_out_of_range, "partial_derivative: index out of range");
    const Mask bit = 1U << i;
    std::vector<double> out(m.size(), 0.0);
    for (Mask s = 0; s < m.size(); ++s)
        if (!(s & bit)) out[s] = m[s | bit];
    return SubsetMeasure(m.n(), std::move(out), SubsetMeasure::Mode::polynomial);
}

SubsetMeasure contract(const SubsetMeasure& m, int i) {
    if (i < 0 || i >= m.n()) fail(ErrorKind::index_out_of_range, "contract: index out of range");
    const Mask low = (1U << i) - 1U;
    std::vector<double> out(m.size() / 2, 0.0);
    for (Mask s = 0; s < m.size(); ++s) {
        const Mask squeezed = (s & low) | ((s >> (i + 1)) << i);
        out[squeezed] += m[s];
    }
    return SubsetMeasure(m.n() - 1, std::move(out), m.mode());
}

std::vector<double> diagonal_coefficients(const SubsetMeasure& m) {
    std::vector<CompensatedSum<double>> acc(static_cast<std::size_t>(m.n()) + 1);
    for (Mask s = 0; s < m.size(); ++s) acc[static_cast<std::size_t>(std::popcount(s))].add(m[s]);
    std::vector<double> out;
    for (const auto& a : acc) out.push_back(a.value());
    return out;
}

StabilityVerdict is_rayleigh(const SubsetMeasure& m, const StabilityOptions& opts) {
    StabilityVerdict out;
    rayleigh_grid(m, opts, false, out);
    return out;
}

StabilityVerdict is_strongly_rayleigh(const SubsetMeasure& m, const StabilityOptions& opts) {
    StabilityVerdict out;
    rayleigh_grid(m, opts, true, out);
    if (out.violated()) return out;

    const int n = m.n();
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (std::size_t line = 0; line < opts.lines; ++line) {
        Stream stream(opts.seed, kLineStreamBase + line);
        for (int k = 0; k < n; ++k) {
            a[static_cast<std::size_t>(k)] =
                line % 2 == 0 ? stream.uniform(opts.lower, opts.upper) : stream.normal();
            b[static_cast<std::size_t>(k)] = stream.uniform(0.05, 1.0);
        }
        ++out.line_trials;
        const auto coeffs = line_polynomial<double>(m, a, b);
        const auto fast = sturm_real_rootedness<double>(coeffs, kDoubleZero, kDoubleBand);
        if (fast.real_rooted && !fast.ambiguous) continue;

        const auto precise = sturm_real_rootedness<Extended>(line_polynomial<Extended>(m, a, b),
                                                             kExtendedZero, kExtendedBand);
        if (precise.ambiguous) {
            ++out.ambiguous_trials;
            continue;
        }
        if (precise.real_rooted) continue;
        out.status = StabilityVerdict::Status::violated;
        out.line_witness = LineWitness{a, b, coeffs, precise.distinct_real, precise.distinct_total};
        return out;
    }
    return out;
}

double elementary_symmetric(std::span<const double> values, int k) {
    const int n = static_cast<int>(values.size());
    if (k < 0 || k > n)
        fail(ErrorKind::index_out_of_range, "elementary_symmetric: degree out of range");
    std::vector<CompensatedSum<double>> e(static_cast<std::size_t>(k) + 1);
    e[0].add(1.0);
    for (int i = 0; i < n; ++i) {
        const double v = values[static_cast<std::size_t>(i)];
        for (int j = std::min(i + 1, k); j >= 1; --j)
            e[static_cast<std::size_t>(j)].add(v * e[static_cast<std::size_t>(j - 1)].value());
    }
    return e[static_cast<std::size_t>(k)].value();
}

RootednessResult generating_polynomial_real_rootedness(const Pmf& p) {
    const auto& probs = p.probs();
    const RootednessResult fast =
        sturm_real_rootedness<double>(std::vector<double>(probs.begin(), probs.end()), kDoubleZero, kDoubleBand);
    if (!fast.ambiguous) return fast;
    std::vector<Extended> wide(probs.begin(), probs.end());
    return sturm_real_rootedness<Extended>(std::move(wide), kExtendedZero, kExtendedBand);
}

SubsetMeasure polarize(const Pmf& tau) {
    const int n = tau.bound();
    if (n < 1) fail(ErrorKind::degenerate_support, "polarize: support bound must be at least 1");
    check_ground_set(n, "polarize");
    std::vector<double> level(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) level[static_cast<std::size_t>(k)] = tau[k] / binomial_coefficient(n, k);
    std::vector<double> coeffs(std::size_t{1} << n);
    for (Mask s = 0; s < coeffs.size(); ++s) coeffs[s] = level[static_cast<std::size_t>(std::popcount(s))];
    return SubsetMeasure(n, std::move(coeffs));
}

SubsetMeasure product_measure(std::span<const double> ps) {
    const int n = static_cast<int>(ps.size());
    check_ground_set(n, "product_measure");
    for (double p : ps)
        if (!(p >= 0.0 && p <= 1.0))
            fail(ErrorKind::domain, "product_measure: probability outside [0, 1]");
    std::vector<double> coeffs(std::size_t{1} << n);
    for (Mask s = 0; s < coeffs.size(); ++s) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) w *= (s >> i & 1U) ? ps[static_cast<std::size_t>(i)] : 1.0 - ps[static_cast<std::size_t>(i)];
        coeffs[s] = w;
    }
    return SubsetMeasure(n, std::move(coeffs));
}

}  // namespace negassoc
