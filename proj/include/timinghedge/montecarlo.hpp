#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "timinghedge/model.hpp"
#include "timinghedge/types.hpp"

namespace timinghedge {

// Skeleton of one simulated path handed to per-path functionals.
// x has n_steps+1 entries; p_cross[k] is the probability that the barrier was
// crossed during step k given the skeleton (1 if the skeleton itself is at or
// below the barrier, the Brownian-bridge probability when bridge is on, 0
// otherwise); surv[k] = prod_{j<k} (1 - p_cross[j]) so surv[0] = 1 and
// 1 - surv[k] = P(tau <= t_k | skeleton).
struct PathView {
    std::span<const double> x;
    std::span<const double> p_cross;
    std::span<const double> surv;
    double dt;
};

using PathFunctional = std::function<void(const PathView&, std::span<double>)>;

// Runs the path engine and accumulates per-output mean/stderr. Paths are
// generated from a counter-based RNG keyed by (seed, path index, step), and
// partial sums are combined in fixed batch order, so results are bit-exact
// regardless of n_threads. With antithetic on, the sampling unit is the
// (Z, -Z) pair and outputs are pair averages.
std::vector<McEstimate> mc_run_paths(const GbmParams& params, double x0,
                                     double horizon,
                                     std::optional<double> barrier,
                                     const McConfig& cfg, std::size_t n_out,
                                     const PathFunctional& f);

// Exact Gaussian terminal sampling: X_T ~ N(x0 + mu T, sigma^2 T).
std::vector<double> simulate_terminal(const GbmParams& params, double x0,
                                      double horizon, const McConfig& cfg);
McEstimate estimate_terminal(const GbmParams& params, double x0, double horizon,
                             const McConfig& cfg,
                             const std::function<double(double)>& g);

// Per-path barrier-hit summary: weight = P(tau <= horizon | skeleton),
// hit_time = conditional mean crossing time (midpoint-of-step resolution).
struct PathHit {
    double weight;
    double hit_time;
};
std::vector<PathHit> hitting_indicator(const GbmParams& params, double x0,
                                       double barrier, double horizon,
                                       const McConfig& cfg);
McEstimate hitting_probability_mc(const GbmParams& params, double x0,
                                  double barrier, double horizon,
                                  const McConfig& cfg);

// Hedging-error oracle: E[(e^{X_D} - K')^+ - (e^{2 log K - X_D} - K')^+] with
// X_0 = log K, D = T - tau. Antithetic pairs cancel pathwise when mu = 0.
McEstimate he1_mc(const BarrierContract& contract, const GbmParams& params,
                  const McConfig& cfg);

// Knock-out price and the semi-static hedge portfolios on shared paths.
// hedge0 = E[pi(F)(X_T)] (plain reflection hedge); hedge1 subtracts the
// order-1 knock-in integral; d0/d1 are the paired replication gaps
// KO - hedge0 and KO - hedge1; corr is the paired difference d0 - d1.
struct ReplicationStudy {
    McEstimate ko;
    McEstimate hedge0;
    McEstimate hedge1;
    McEstimate d0;
    McEstimate d1;
    McEstimate corr;
};
ReplicationStudy replication_mc(const BarrierContract& contract,
                                const GbmParams& params, const PayoffSpec& payoff,
                                double x0, const McConfig& cfg);

McEstimate knockout_price_mc(const BarrierContract& contract,
                             const GbmParams& params, const PayoffSpec& payoff,
                             double x0, const McConfig& cfg);
// order = 0 or 1 correction terms included.
McEstimate hedge_portfolio_mc(const BarrierContract& contract,
                              const GbmParams& params, const PayoffSpec& payoff,
                              double x0, int order, const McConfig& cfg);

}  // namespace timinghedge
