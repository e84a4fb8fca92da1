#include "timinghedge/timing_risk.hpp"

#include <cmath>
#include <numbers>

#include "timinghedge/montecarlo.hpp"
#include "timinghedge/numerics.hpp"

namespace timinghedge {

double first_passage_cdf(const FirstPassageSpec& spec, double s) {
    if (!(s >= 0.0)) throw std::domain_error("first_passage_cdf: s must be >= 0");
    if (s == 0.0) return 0.0;
    const double b = spec.b();
    const double mu = spec.params.mu();
    const double sig = spec.params.sigma;
    const double sd = sig * std::sqrt(s);
    return normal_cdf((-b - mu * s) / sd) +
           std::exp(-2.0 * mu * b / (sig * sig)) * normal_cdf((-b + mu * s) / sd);
}

double first_passage_pdf(const FirstPassageSpec& spec, double s) {
    if (s <= 0.0) return 0.0;
    const double b = spec.b();
    const double mu = spec.params.mu();
    const double sig = spec.params.sigma;
    const double d = b + mu * s;
    return b / (sig * std::sqrt(2.0 * std::numbers::pi * s * s * s)) *
           std::exp(-0.5 * d * d / (sig * sig * s));
}

CarrPicronSides carr_picron_sides(const FirstPassageSpec& spec, double quad_tol) {
    const double r = spec.params.r;
    const double T = spec.horizon;
    CarrPicronSides out;
    out.lhs = adaptive_simpson(
        [&](double s) { return std::exp(-r * s) * first_passage_pdf(spec, s); }, 0.0,
        T, quad_tol);
    const double tail = adaptive_simpson(
        [&](double s) { return std::exp(-r * s) * first_passage_cdf(spec, s); }, 0.0,
        T, quad_tol);
    out.rhs = std::exp(-r * T) * first_passage_cdf(spec, T) + r * tail;
    return out;
}

double carr_picron_residual(const FirstPassageSpec& spec, double quad_tol) {
    return carr_picron_sides(spec, quad_tol).residual();
}

namespace {

// E[F(X_{tau + D}) | X_tau = log K] for the supported payoff kinds.
double inner_value(const PayoffSpec& payoff, const GbmParams& p, double log_k,
                   double D) {
    const double mu = p.mu();
    const double sig = p.sigma;
    if (D <= 0.0) return payoff(log_k);
    const double sd = sig * std::sqrt(D);
    switch (payoff.kind) {
        case PayoffKind::call_above_barrier: {
            const double kp = payoff.strike;
            const double d2 = (log_k - std::log(kp) + mu * D) / sd;
            return std::exp(log_k + (0.5 * sig * sig + mu) * D) * normal_cdf(d2 + sd) -
                   kp * normal_cdf(d2);
        }
        case PayoffKind::digital:
            return normal_cdf((log_k - payoff.log_barrier + mu * D) / sd);
        case PayoffKind::custom_grid: {
            const double m = log_k + mu * D;
            return integrate_gl(
                [&](double y) {
                    const double z = (y - m) / sd;
                    return payoff(y) * normal_pdf(z) / sd;
                },
                m - 10.0 * sd, m + 10.0 * sd, 64);
        }
    }
    return 0.0;
}

}  // namespace

McEstimate timing_risk_value(const FirstPassageSpec& spec, const WeightFn& psi,
                             const PayoffSpec& payoff, const McConfig& cfg) {
    cfg.validate();
    const double T = spec.horizon;
    const std::uint64_t n = cfg.n_steps;
    const double dt = T / static_cast<double>(n);
    // Conditional on the skeleton, the crossing falls in step k with
    // probability surv[k] p_cross[k]; the step midpoint stands in for tau.
    std::vector<double> psi_mid(n), val_mid(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        const double tmid = (static_cast<double>(k) + 0.5) * dt;
        psi_mid[k] = psi.value(T - tmid);
        val_mid[k] =
            inner_value(payoff, spec.params, spec.log_barrier, T - tmid);
    }
    auto r = mc_run_paths(spec.params, spec.start, T, spec.log_barrier, cfg, 1,
                          [&](const PathView& v, std::span<double> out) {
                              double acc = 0.0;
                              for (std::uint64_t k = 0; k < n; ++k) {
                                  const double pk = v.surv[k] * v.p_cross[k];
                                  if (pk > 0.0) acc += pk * psi_mid[k] * val_mid[k];
                              }
                              out[0] = acc;
                          });
    return r[0];
}

}  // namespace timinghedge
