#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "timinghedge/types.hpp"

namespace timinghedge {

// First-order hedging error of the semi-static reflection hedge, conditional
// on hitting at tau with X_tau = log K:
//   He1 = K'[N(d1) - N(d2)]
//       + K e^{sigma^2 D/2} [e^{mu D} N(d2 + sigma sqrt(D))
//                            - e^{-mu D} N(d1 + sigma sqrt(D))],
// D = T - tau, d1 = (log(K/K') - mu D)/sqrt(sigma^2 D),
// d2 = (log(K/K') + mu D)/sqrt(sigma^2 D). Vanishes identically when mu = 0.
// `discounted` applies the extra e^{-r D} present-value factor.
double he1(const BarrierContract& contract, const GbmParams& params,
           bool discounted = false);

// The two option values whose difference is He1:
//   I  = E[(e^{X_D} - K')^+        | X_0 = log K]
//   II = E[(e^{2 log K - X_D} - K')^+ | X_0 = log K]
struct He1Components {
    double first;   // I
    double second;  // II
};
He1Components he1_components(const BarrierContract& contract,
                             const GbmParams& params);

// Quadrature policy for the second-order error. The outer time integral uses
// the substitution s = tau + v^2 (Gauss-Legendre in v); each inner u integral
// runs over one side of u = 0 with Gauss-Legendre on the Gaussian-centred
// window truncated at trunc_std standard deviations (never straddling 0).
struct He2Quadrature {
    std::size_t outer_nodes = 64;
    std::size_t inner_nodes = 64;
    double trunc_std = 8.0;

    void validate() const {
        if (outer_nodes < 4 || inner_nodes < 4)
            throw std::invalid_argument("He2Quadrature: too few nodes");
        if (!(trunc_std >= 8.0))
            throw std::invalid_argument("He2Quadrature: truncation must be >= 8 std");
    }
};

// Second-order hedging error as the sum of the four (s,u) double integrals,
// each of the form
//   +- mu K int_tau^T e^{+-mu(s-tau) + sigma^2(T-tau)/2}
//        int N((log(K/K') +- u + sigma^2(T-s))/sqrt(sigma^2(T-s)))
//            x Gaussian(u; (mu +- sigma^2)(s-tau), sigma^2(s-tau)) du ds
// over the half-lines u > 0 (components 1,2) and u < 0 (components 3,4).
// Carries the overall factor mu K, so it is identically 0 when mu = 0.
struct He2Result {
    double total = 0.0;
    std::array<double, 4> components{};
};
He2Result he2(const BarrierContract& contract, const GbmParams& params,
              const He2Quadrature& q = {}, bool discounted = false);

// gamma = He2 / He1; throws UndefinedRatioError when |He1| < 1e-12.
// 1 - |gamma| is the hedging benefit of iterating once more.
double ratio_gamma(const BarrierContract& contract, const GbmParams& params,
                   const He2Quadrature& q = {});

enum class SurfaceKind { first, second, ratio };
const char* surface_kind_name(SurfaceKind k);

// (K', sigma) grid of error values. Row-major over kprime (outer) x sigma
// (inner); ratio cells with He1 under the floor are flagged undefined and
// exported as nan.
struct ErrorSurface {
    SurfaceKind kind = SurfaceKind::first;
    std::vector<double> kprime_axis;
    std::vector<double> sigma_axis;
    std::vector<double> values;
    std::vector<std::uint8_t> defined;

    double at(std::size_t i, std::size_t j) const {
        return values[i * sigma_axis.size() + j];
    }
    bool is_defined(std::size_t i, std::size_t j) const {
        return defined[i * sigma_axis.size() + j] != 0;
    }
    // CSV: header "kprime,sigma,value,kind", 17 significant digits.
    void write_csv(std::ostream& os) const;
};

struct SweepFixed {
    double barrier = 80.0;  // K
    double r = 0.03;
    double maturity = 1.0;  // T
    double hit_time = 0.6;  // tau
};

ErrorSurface sweep_surface(SurfaceKind kind, const std::vector<double>& kprime_axis,
                           const std::vector<double>& sigma_axis,
                           const SweepFixed& fixed, const He2Quadrature& q = {},
                           unsigned n_threads = 0);

}  // namespace timinghedge
