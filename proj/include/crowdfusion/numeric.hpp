#pragma once

#include <cmath>
#include <cstdint>

// Small numeric helpers shared by the exact enumerations.

namespace crowdfusion {

// Kahan compensated accumulator. The enumeration sums mix tiny terms of both
// signs; plain += loses the cancellation structure we assert on in tests.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -INFINITY;
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

inline double binomial(int n, int k) { return std::exp(log_binomial(n, k)); }

// q * log(base) with the 0 * log(0) = 0 convention
inline double xlog(int q, double log_base) { return q == 0 ? 0.0 : q * log_base; }

// upper tail of the standard normal
inline double q_function(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

inline double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

} // namespace crowdfusion
