#pragma once

// Brute-force reference computations used as test oracles. They are
// deliberately naive and share no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double choose(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Law of a sum of independent Bernoullis by enumerating all 2^n outcomes.
inline std::vector<double> poisson_binomial(const std::vector<double>& ps) {
    const std::size_t n = ps.size();
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double w = 1.0;
        int k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1) {
                w *= ps[i];
                ++k;
            } else {
                w *= 1.0 - ps[i];
            }
        }
        out[static_cast<std::size_t>(k)] += w;
    }
    return out;
}

inline std::vector<double> binomial(int n, double p) {
    std::vector<double> out;
    for (int k = 0; k <= n; ++k) out.push_back(choose(n, k) * std::pow(p, k) * std::pow(1 - p, n - k));
    return out;
}

inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline double stop_loss(const std::vector<double>& p, double k) {
    double s = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) s += p[x] * std::max(0.0, static_cast<double>(x) - k);
    return s;
}

/// Count law of a mixed sampled process by enumerating every label sequence
/// of every point count N (labels 0..m-1 tracked, m = remainder).
inline std::map<std::vector<int>, double> mixed_counts(const std::vector<double>& tau,
                                                       const std::vector<double>& q) {
    const std::size_t m = q.size();
    double rest = 1.0;
    for (double v : q) rest -= v;
    std::map<std::vector<int>, double> out;
    for (std::size_t n = 0; n < tau.size(); ++n) {
        if (tau[n] == 0.0) continue;
        std::vector<std::size_t> labels(n, 0);
        while (true) {
            double w = tau[n];
            std::vector<int> counts(m, 0);
            for (std::size_t l : labels) {
                if (l < m) {
                    w *= q[l];
                    ++counts[l];
                } else {
                    w *= rest;
                }
            }
            if (w > 0.0) out[counts] += w;
            std::size_t pos = 0;
            while (pos < n && ++labels[pos] == m + 1) labels[pos++] = 0;
            if (pos == n) break;
        }
    }
    return out;
}

using Point = std::vector<double>;

inline bool leq(const Point& a, const Point& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

/// Every up-set of a small point set by testing all 2^n subsets; the empty
/// set and the full set are left out.
inline std::vector<std::vector<bool>> up_sets(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    std::vector<std::vector<bool>> out;
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        bool closed = true;
        for (std::size_t a = 0; a < n && closed; ++a)
            if (mask >> a & 1)
                for (std::size_t b = 0; b < n && closed; ++b)
                    if (!(mask >> b & 1) && leq(pts[a], pts[b])) closed = false;
        if (!closed) continue;
        std::vector<bool> members(n);
        for (std::size_t a = 0; a < n; ++a) members[a] = mask >> a & 1;
        out.push_back(members);
    }
    return out;
}

struct Atom {
    Point x;
    double p;
};

inline std::vector<Point> project_support(const std::vector<Atom>& law, const std::vector<std::size_t>& block) {
    std::vector<Point> pts;
    for (const auto& a : law) {
        Point y;
        for (std::size_t c : block) y.push_back(a.x[c]);
        if (std::find(pts.begin(), pts.end(), y) == pts.end()) pts.push_back(y);
    }
    return pts;
}

inline std::size_t index_of(const std::vector<Point>& pts, const Atom& a, const std::vector<std::size_t>& block) {
    Point y;
    for (std::size_t c : block) y.push_back(a.x[c]);
    return static_cast<std::size_t>(std::find(pts.begin(), pts.end(), y) - pts.begin());
}

/// Largest Cov(1_U(X_A), 1_V(X_B)) over disjoint non-empty blocks A, B and
/// all up-sets U, V of their marginal supports (0 if no pair is positive).
inline double na_max_covariance(const std::vector<Atom>& law, std::size_t dim) {
    double worst = 0.0;
    const std::size_t full = std::size_t{1} << dim;
    for (std::size_t a = 1; a < full; ++a) {
        for (std::size_t b = 1; b < full; ++b) {
            if (a & b) continue;
            std::vector<std::size_t> ba, bb;
            for (std::size_t c = 0; c < dim; ++c) {
                if (a >> c & 1) ba.push_back(c);
                if (b >> c & 1) bb.push_back(c);
            }
            const auto pa = project_support(law, ba), pb = project_support(law, bb);
            const auto ua = up_sets(pa), ub = up_sets(pb);
            std::vector<std::size_t> ia, ib;
            for (const auto& at : law) {
                ia.push_back(index_of(pa, at, ba));
                ib.push_back(index_of(pb, at, bb));
            }
            for (const auto& u : ua)
                for (const auto& v : ub) {
                    double pu = 0, pv = 0, puv = 0;
                    for (std::size_t t = 0; t < law.size(); ++t) {
                        const bool inu = u[ia[t]], inv = v[ib[t]];
                        if (inu) pu += law[t].p;
                        if (inv) pv += law[t].p;
                        if (inu && inv) puv += law[t].p;
                    }
                    worst = std::max(worst, puv - pu * pv);
                }
        }
    }
    return worst;
}

/// P(eta = S) = sum_{T >= S} (-1)^{|T \ S|} det(K_T) (inclusion-exclusion over
/// the inclusion probabilities).
inline std::vector<double> dpp_subset_law(const Eigen::MatrixXd& k) {
    const auto n = static_cast<std::size_t>(k.rows());
    const std::size_t full = std::size_t{1} << n;
    std::vector<double> incl(full);
    for (std::size_t t = 0; t < full; ++t) {
        std::vector<Eigen::Index> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (t >> i & 1) idx.push_back(static_cast<Eigen::Index>(i));
        Eigen::MatrixXd sub(idx.size(), idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c) sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = k(idx[r], idx[c]);
        incl[t] = idx.empty() ? 1.0 : sub.determinant();
    }
    std::vector<double> out(full, 0.0);
    for (std::size_t s = 0; s < full; ++s)
        for (std::size_t t = 0; t < full; ++t)
            if ((t & s) == s) {
                const int extra = __builtin_popcountll(t & ~s);
                out[s] += (extra % 2 ? -1.0 : 1.0) * incl[t];
            }
    return out;
}

/// Multi-affine polynomial sum_S c_S prod_{i in S} x_i by direct expansion.
inline double evaluate(const std::vector<double>& coeffs, const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t mask = 0; mask < coeffs.size(); ++mask) {
        double term = coeffs[mask];
        for (std::size_t i = 0; i < x.size(); ++i)
            if (mask >> i & 1) term *= x[i];
        s += term;
    }
    return s;
}

/// dP/dx_i dP/dx_j - P d2P/dx_i dx_j using that P is affine in each variable.
inline double rayleigh_slack(const std::vector<double>& coeffs, std::vector<double> x, int i, int j) {
    auto at = [&](double xi, double xj) {
        x[static_cast<std::size_t>(i)] = xi;
        x[static_cast<std::size_t>(j)] = xj;
        return evaluate(coeffs, x);
    };
    const double xi = x[static_cast<std::size_t>(i)], xj = x[static_cast<std::size_t>(j)];
    const double p00 = at(0, 0), p10 = at(1, 0), p01 = at(0, 1), p11 = at(1, 1);
    const double di = (p10 - p00) + (p11 - p10 - p01 + p00) * xj;
    const double dj = (p01 - p00) + (p11 - p10 - p01 + p00) * xi;
    const double dij = p11 - p10 - p01 + p00;
    const double p = at(xi, xj);
    return di * dj - p * dij;
}

/// Real-rootedness from companion-matrix eigenvalues (coefficients lowest
/// degree first).
inline bool real_rooted(std::vector<double> c, double imag_tol = 1e-7) {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    const std::size_t d = c.size() - 1;
    if (d <= 1) return true;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 1; r < d; ++r) comp(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r - 1)) = 1.0;
    for (std::size_t r = 0; r < d; ++r) comp(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d - 1)) = -c[r] / c[d];
    const Eigen::VectorXcd ev = comp.eigenvalues();
    for (Eigen::Index r = 0; r < ev.size(); ++r)
        if (std::abs(ev[r].imag()) > imag_tol * std::max(1.0, std::abs(ev[r]))) return false;
    return true;
}

}  // namespace oracle
