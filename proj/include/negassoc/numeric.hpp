#pragma once

#include <cmath>
#include <cstdint>

namespace negassoc {

// Neumaier compensated accumulator. Works for any scalar with the usual
// arithmetic and an abs() findable by ADL or in std.
template <typename T>
class CompensatedSum {
public:
    CompensatedSum() : sum_(0), comp_(0) {}

    void add(const T& x) {
        using std::abs;
        T t = sum_ + x;
        if (abs(sum_) >= abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    T value() const { return sum_ + comp_; }

private:
    T sum_;
    T comp_;
};

// C(n, k) as a double. Exact for every n <= 56 or so; used only for small n.
inline double binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
    return std::round(r);
}

}  // namespace negassoc
