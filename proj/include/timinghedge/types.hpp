#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <cmath>

namespace timinghedge {

// Log-price model used throughout the numerical sections:
//   X_t = X_0 + sigma W_t + mu t,  mu = r - sigma^2/2.
// mu is always derived from (r, sigma), never stored.
struct GbmParams {
    double r = 0.03;
    double sigma = 0.2;

    GbmParams() = default;
    GbmParams(double r_, double sigma_) : r(r_), sigma(sigma_) {
        if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(r))
            throw std::domain_error("GbmParams: sigma must be finite and > 0");
    }
    double mu() const { return r - 0.5 * sigma * sigma; }
};

// Knock-in barrier option being hedged plus the strike of the hedging
// vanillas. Prices are in currency; the barrier lives at log(K) in log space.
struct BarrierContract {
    double barrier = 80.0;       // K
    double hedge_strike = 90.0;  // K'
    double maturity = 1.0;       // T (years)
    double hit_time = 0.6;       // tau (years)

    BarrierContract() = default;
    BarrierContract(double K, double Kprime, double T, double tau)
        : barrier(K), hedge_strike(Kprime), maturity(T), hit_time(tau) {
        if (!(barrier > 0.0) || !(barrier <= hedge_strike))
            throw std::domain_error("BarrierContract: need 0 < K <= K'");
        if (!(hit_time >= 0.0) || !(hit_time < maturity))
            throw std::domain_error("BarrierContract: need 0 <= tau < T");
    }
    double log_barrier() const { return std::log(barrier); }
    double remaining() const { return maturity - hit_time; }  // T - tau
};

// Weight applied to the covered portion of the option price. Calls supply
// both psi and psi'; the derivative enters the parametrix kernel when
// psi is not constant.
struct WeightFn {
    std::function<double(double)> value;
    std::function<double(double)> deriv;

    static WeightFn one() {
        return {[](double) { return 1.0; }, [](double) { return 0.0; }};
    }
    // psi(u) = e^{-r(T-u)}: discounts a payment due at time T-u from now.
    static WeightFn discounted_tail(double r, double T) {
        return {[r, T](double u) { return std::exp(-r * (T - u)); },
                [r, T](double u) { return r * std::exp(-r * (T - u)); }};
    }
};

// Monte Carlo run configuration. Estimates are bit-exact functions of
// (config, inputs) regardless of n_threads.
struct McConfig {
    std::uint64_t n_paths = 100000;
    std::uint64_t n_steps = 64;
    std::uint64_t seed = 42;
    bool bridge = true;
    bool antithetic = false;
    unsigned n_threads = 0;  // 0 = hardware concurrency

    void validate() const {
        if (n_paths < 1 || n_steps < 1)
            throw std::invalid_argument("McConfig: n_paths and n_steps must be >= 1");
    }
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_effective = 0;  // independent sampling units (pairs when antithetic)
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UndefinedRatioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace timinghedge
