#pragma once

#include "timinghedge/grid.hpp"
#include "timinghedge/model.hpp"
#include "timinghedge/types.hpp"

namespace timinghedge {

// Quadrature policy for the iterated operators. Time composition uses the
// substitution s = v^2 (Gauss-Legendre in v); the spatial kernel integral is
// evaluated exactly against the piecewise-linear grid function over a window
// of window_std * sqrt(t) around each node.
struct SOpConfig {
    std::size_t time_nodes = 32;
    double window_std = 8.0;
};

// (S^{p^pi})^1_t f(x) = int h(t,x,y) pi(f)(y) dy on the grid, everything in
// post-Lamperti coordinates. pi is applied internally, so callers pass raw f;
// the domain boundary is the payoff's log barrier mapped through the Lamperti
// transform. Exact per linear cell: the Gaussian first moments over each cell
// are closed-form, so the only spatial error is the interpolation of f.
GridFunction s_op_1(const DiffusionSpec1D& spec, const PayoffSpec& payoff,
                    double t, const GridFunction& f,
                    const SOpConfig& cfg = {});

// N-fold iteration, (S)^N_t f = int_0^t (S)^1_s (S)^{N-1}_{t-s} f ds.
GridFunction s_op_n(const DiffusionSpec1D& spec, const PayoffSpec& payoff,
                    double t, const GridFunction& f, int order,
                    const SOpConfig& cfg = {});

// Inputs to the explicit convergence bound of the iterated-kernel chain.
struct SeriesBoundInputs {
    double c_q;      // density envelope constant: q <= C_q t^{-1/2} e^{-(x-y)^2/4t}
    double c_b;      // kernel constant
    double f_inf;    // sup |F| over the evaluation domain
    double horizon;  // T
    int order;       // N >= 1

    void validate() const {
        if (!(c_q > 0.0) || !(c_b >= 0.0) || !(f_inf > 0.0) || !(horizon > 0.0))
            throw std::invalid_argument("SeriesBoundInputs: nonpositive input");
        if (order < 1) throw std::invalid_argument("SeriesBoundInputs: order < 1");
    }
};

// N = 1:   2^{7/2} pi^{1/2} C_q C_b K_{1/2} |F| T^{1/2}
// N >= 2:  2^{3N/2+2} pi^{1/2} C_q C_b^N K_{1/2}^N |F|
//            prod_{k=1}^{N-1} B(k/2, 1/2) (N-1)^{-1} T^{(N-1)/2}
double series_bound(const SeriesBoundInputs& inputs);

// Density envelope constant of the constant-coefficient model with Lamperti
// drift lambda = mu/sigma: C_q = (2 pi)^{-1/2} e^{lambda^2 T / 2}.
double series_bound_cq_constant_model(const GbmParams& params, double horizon);

// Index of the largest bound value over 1..n_max; the sequence decreases
// beyond it (factorial decay of the Beta product).
int series_bound_turnover(SeriesBoundInputs inputs, int n_max = 64);

struct IdentityQuadrature {
    std::size_t time_nodes = 32;  // per half, after endpoint substitutions
    std::size_t space_nodes = 64;
    double trunc_std = 10.0;
};

// Residual of the parametrix identity for the constant-coefficient model
// (q the drifted Gaussian, p the driftless one, both with variance sigma^2 t):
//   psi(t) q(t,x,y) - psi(0) p(t,x,y)
//     - int_0^t int q(t-s,x,z) [psi'(s) + psi(s)(L_z - d_s)] p(s,z,y) dz ds.
// The z window follows the Gaussian-product posterior so both time endpoints
// stay resolved.
double parametrix_identity_residual(const GbmParams& params, double t, double x,
                                    double y, const WeightFn& psi,
                                    const IdentityQuadrature& q = {});

// Closed form of (S^1_t F)(x) for the call payoff under the constant model,
// x in log-price coordinates (coordinate-free: equals the post-Lamperti value
// at s(x)):
//   mu [ e^{x + sigma^2 t/2} N((x - log K' + sigma^2 t)/(sigma sqrt t))
//     + e^{2 log K - x + sigma^2 t/2} N((2 log K - log K' - x + sigma^2 t)/(sigma sqrt t)) ].
double s_op1_closed_form(const BarrierContract& contract, const GbmParams& params,
                         double t, double x);

// Grid/table configuration for the Monte Carlo hedge of Thm-style order N.
struct HedgeTableConfig {
    std::size_t grid_nodes = 257;    // odd, barrier-centred
    double grid_std = 10.0;          // half-width in post-Lamperti std units
    std::size_t time_levels = 16;    // slices of (S)^N_{T-s}
    SOpConfig s_op;
};

struct TruncatedHedge {
    McEstimate hedge;     // E[pi(F)(X_T)] minus the first N-1 correction integrals
    McEstimate residual;  // -int_0^T E[1_{tau<=s} (S)^N_{T-s} F (X_s)] ds
};

// Order-N semi-static hedge and its residual, N in {1, 2}. N = 1 is the plain
// reflection hedge; N = 2 subtracts the order-1 knock-in integral. The sign
// convention is pinned so that at mu = 0 the hedge reproduces the knock-out
// price exactly.
TruncatedHedge truncated_hedge_value(const BarrierContract& contract,
                                     const GbmParams& params,
                                     const PayoffSpec& payoff, double x0, int order,
                                     const McConfig& mc,
                                     const HedgeTableConfig& tables = {});

}  // namespace timinghedge
