#pragma once

// Test-only reference implementations, independent of the library's own
// evaluation paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace oracles {

// erf by long-double Maclaurin series; max term stays small for |x| <= 2 so
// the result is good to ~1e-18 there.
inline long double erf_series(long double x) {
    const long double x2 = x * x;
    long double term = x;
    long double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / n;
        const long double add = term / (2 * n + 1);
        sum += add;
        if (std::fabs((double)add) < 1e-22L * std::fabs((double)sum)) break;
    }
    return sum * 2.0L / std::sqrt(3.14159265358979323846264338328L);
}

// erfc(x) = e^{-x^2}/(sqrt(pi) J), J = x + (1/2)/(x + 1/(x + (3/2)/(x + ...))),
// evaluated by modified Lentz; accurate for x >= 2.
inline long double erfc_cf(long double x) {
    const long double tiny = 1e-30L;
    long double f = x, c = x, d = 0.0L;
    for (int n = 1; n < 300; ++n) {
        const long double an = n / 2.0L;
        d = x + an * d;
        if (std::fabs((double)d) < (double)tiny) d = tiny;
        d = 1.0L / d;
        c = x + an / c;
        if (std::fabs((double)c) < (double)tiny) c = tiny;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs((double)(delta - 1.0L)) < 1e-19) break;
    }
    return std::exp(-x * x) / (std::sqrt(3.14159265358979323846264338328L) * f);
}

// Standard normal CDF reference: series for the bulk, continued fraction for
// the tails.
inline double normal_cdf_ref(double z) {
    const long double a = std::fabs((long double)z) / std::sqrt(2.0L);
    long double tail;
    if (a <= 2.0L)
        tail = 0.5L * (1.0L - erf_series(a));
    else
        tail = 0.5L * erfc_cf(a);
    return (double)(z >= 0 ? 1.0L - tail : tail);
}

// Dense trapezoid with Richardson refinement until two levels agree to tol.
inline double trapezoid_refine(const std::function<double(double)>& f, double a,
                               double b, double tol) {
    int n = 64;
    double prev = 0.0;
    for (int level = 0; level < 22; ++level) {
        const double h = (b - a) / n;
        long double s = 0.5L * (f(a) + f(b));
        for (int i = 1; i < n; ++i) s += f(a + i * h);
        const double cur = (double)(s * h);
        if (level > 2 && std::abs(cur - prev) < tol) return cur;
        prev = cur;
        n *= 2;
    }
    throw std::runtime_error("trapezoid_refine: no convergence");
}

// Small deterministic generator for property sweeps.
struct Xorshift {
    std::uint64_t s;
    explicit Xorshift(std::uint64_t seed) : s(seed ? seed : 0x9E3779B97F4A7C15ull) {}
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (double)(next() >> 11) * 0x1.0p-53;
    }
};

}  // namespace oracles
