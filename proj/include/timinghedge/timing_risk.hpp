#pragma once

#include "timinghedge/model.hpp"
#include "timinghedge/types.hpp"

namespace timinghedge {

// First passage of the drifted log-price to a down-barrier:
// tau = inf{ s > 0 : X_s < log K }, started strictly inside D = [log K, oo).
struct FirstPassageSpec {
    double start;        // X_0 (log-price)
    double log_barrier;  // log K
    GbmParams params;
    double horizon;      // T

    FirstPassageSpec(double start_, double log_barrier_, const GbmParams& p,
                     double horizon_)
        : start(start_), log_barrier(log_barrier_), params(p), horizon(horizon_) {
        if (!(start > log_barrier))
            throw std::domain_error("FirstPassageSpec: start must be above the barrier");
        if (!(horizon > 0.0)) throw std::domain_error("FirstPassageSpec: horizon <= 0");
    }
    double b() const { return start - log_barrier; }
};

// Inverse-Gaussian law of tau:
// P(tau <= s) = N((-b - mu s)/(sigma sqrt(s))) + e^{-2 mu b / sigma^2} N((-b + mu s)/(sigma sqrt(s))).
double first_passage_cdf(const FirstPassageSpec& spec, double s);

// Analytic density (derivative of the CDF), used for the discounted-hit
// quadratures so no differentiation noise enters the identity checks.
double first_passage_pdf(const FirstPassageSpec& spec, double s);

struct CarrPicronSides {
    double lhs;  // E[e^{-r tau} 1_{tau <= T}] by quadrature of the density
    double rhs;  // e^{-rT} P(tau <= T) + r int_0^T e^{-rs} P(tau <= s) ds
    double residual() const { return lhs - rhs; }
};
CarrPicronSides carr_picron_sides(const FirstPassageSpec& spec,
                                  double quad_tol = 1e-12);
double carr_picron_residual(const FirstPassageSpec& spec, double quad_tol = 1e-12);

// Monte Carlo value of the timing risk E[1_{tau<T} psi(T-tau) E[F(X_T)|F_tau]]
// from bridge-corrected path simulation. The conditional inner expectation is
// evaluated at the barrier restart X_tau = log K in closed form (call,
// digital) or by quadrature (custom grid). No discounting is applied beyond
// what psi carries; multiply by e^{-rT} for the time-0 present value.
McEstimate timing_risk_value(const FirstPassageSpec& spec, const WeightFn& psi,
                             const PayoffSpec& payoff, const McConfig& cfg);

}  // namespace timinghedge
