#pragma once

// Real-rootedness of a univariate polynomial by Sturm sequences.
//
// A polynomial p is real-rooted iff its number of distinct real roots (Sturm
// count) equals its number of distinct roots, deg p - deg gcd(p, p'). The gcd
// is the last non-zero member of the Sturm sequence. Every member is rescaled
// to unit max-norm, and a remainder is declared zero when its max-norm falls
// below `zero_eps`. Decisions whose magnitude lands inside the guard band
// (zero_eps, band_eps] are flagged ambiguous so that callers can recompute at
// higher precision.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace negassoc {

struct RootednessResult {
    bool real_rooted = true;
    bool ambiguous = false;
    int degree = 0;
    int distinct_real = 0;
    int distinct_total = 0;
};

namespace detail {

template <typename T>
T max_norm(const std::vector<T>& p) {
    using std::abs;
    T m(0);
    for (const T& c : p) m = std::max<T>(m, abs(c));
    return m;
}

// Drops leading coefficients below eps * scale.
template <typename T>
bool trim(std::vector<T>& p, const T& scale, const T& zero_eps, const T& band_eps) {
    using std::abs;
    bool ambiguous = false;
    while (!p.empty()) {
        const T a = abs(p.back());
        if (a <= zero_eps * scale) {
            p.pop_back();
            continue;
        }
        if (a <= band_eps * scale) ambiguous = true;
        break;
    }
    return ambiguous;
}

template <typename T>
void normalize(std::vector<T>& p) {
    const T m = max_norm(p);
    if (m > T(0))
        for (T& c : p) c /= m;
}

// Remainder of a / b; coefficients are stored lowest degree first.
template <typename T>
std::vector<T> remainder(std::vector<T> a, const std::vector<T>& b) {
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const T factor = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= factor * b[i];
        a.pop_back();
    }
    return a;
}

template <typename T>
int sign_of(const T& x) {
    return x > T(0) ? 1 : (x < T(0) ? -1 : 0);
}

}  // namespace detail

/// coeffs are lowest degree first.
template <typename T>
RootednessResult sturm_real_rootedness(std::vector<T> coeffs, const T& zero_eps,
                                       const T& band_eps) {
    RootednessResult out;
    const T scale = detail::max_norm(coeffs);
    if (!(scale > T(0))) return out;  // zero polynomial
    out.ambiguous = detail::trim(coeffs, scale, zero_eps, band_eps);
    detail::normalize(coeffs);
    out.degree = static_cast<int>(coeffs.size()) - 1;
    if (out.degree <= 1) {
        out.distinct_real = out.distinct_total = out.degree;
        return out;
    }

    std::vector<std::vector<T>> seq;
    seq.push_back(coeffs);
    std::vector<T> deriv(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) deriv[i - 1] = coeffs[i] * T(static_cast<int>(i));
    detail::normalize(deriv);
    seq.push_back(deriv);

    while (seq.back().size() > 1) {
        std::vector<T> r = detail::remainder(seq[seq.size() - 2], seq.back());
        // Members are unit-norm, so the remainder is judged on an absolute scale.
        if (detail::trim(r, T(1), zero_eps, band_eps)) out.ambiguous = true;
        if (r.empty()) break;
        for (T& c : r) c = -c;
        detail::normalize(r);
        seq.push_back(std::move(r));
    }

    int changes_pos = 0, changes_neg = 0;
    int last_pos = 0, last_neg = 0;
    for (const auto& poly : seq) {
        const int lead = detail::sign_of(poly.back());
        const int deg = static_cast<int>(poly.size()) - 1;
        const int at_pos = lead;
        const int at_neg = (deg % 2 == 0) ? lead : -lead;
        if (at_pos != 0) {
            if (last_pos != 0 && at_pos != last_pos) ++changes_pos;
            last_pos = at_pos;
        }
        if (at_neg != 0) {
            if (last_neg != 0 && at_neg != last_neg) ++changes_neg;
            last_neg = at_neg;
        }
    }
    const int gcd_degree = static_cast<int>(seq.back().size()) - 1;
    out.distinct_real = changes_neg - changes_pos;
    out.distinct_total = out.degree - gcd_degree;
    out.real_rooted = out.distinct_real == out.distinct_total;
    return out;
}

}  // namespace negassoc
