#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "timinghedge/hedging_errors.hpp"
#include "timinghedge/montecarlo.hpp"
#include "timinghedge/numerics.hpp"
#include "timinghedge/parametrix.hpp"
#include "timinghedge/timing_risk.hpp"

using namespace timinghedge;

namespace {
const BarrierContract base_contract(80, 90, 1.0, 0.6);
const GbmParams base_params(0.03, 0.2);

DiffusionSpec1D base_spec() {
    return DiffusionSpec1D::constant(base_params, base_contract.log_barrier(),
                                     12.0 * base_params.sigma);
}
PayoffSpec base_payoff() {
    return PayoffSpec::call(90.0, base_contract.log_barrier());
}
GridFunction payoff_grid(std::size_t n = 257, double half = 10.0) {
    const double b = base_contract.log_barrier();
    const PayoffSpec payoff = base_payoff();
    return make_centered_grid(
        0.0, half, n, [&](double z) { return payoff(b + base_params.sigma * z); });
}
}  // namespace

TEST_CASE("s_op_1 trivial zeros") {
    // zero drift, constant sigma: the kernel prefactor vanishes
    const GbmParams nodrift(0.5 * 0.2 * 0.2, 0.2);
    DiffusionSpec1D spec =
        DiffusionSpec1D::constant(nodrift, base_contract.log_barrier(), 2.4);
    const GridFunction f = payoff_grid(65, 8.0);
    const GridFunction out = s_op_1(spec, base_payoff(), 0.4, f);
    for (double v : out.values()) CHECK(v == 0.0);

    // f vanishing on D: pi(f) == 0, so the integral vanishes identically
    const GridFunction below =
        make_centered_grid(0.0, 8.0, 65, [](double z) { return std::max(-z, 0.0); });
    const GridFunction out2 = s_op_1(base_spec(), base_payoff(), 0.4, below);
    for (double v : out2.values()) CHECK(std::abs(v) < 1e-14);

    CHECK_THROWS_AS((void)s_op_1(base_spec(), base_payoff(), 0.0, f),
                    std::domain_error);
}

TEST_CASE("s_op_1 matches the closed form away from the truncation edge") {
    const GridFunction f = payoff_grid(513);
    const GridFunction s1 = s_op_1(base_spec(), base_payoff(), 0.4, f);
    const double b = base_contract.log_barrier();
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double z = f.nodes()[i];
        if (std::abs(z) > 3.0) continue;  // stay clear of the window truncation
        const double x = b + base_params.sigma * z;
        worst = std::max(worst, std::abs(s1.values()[i] -
                                         s_op1_closed_form(base_contract,
                                                           base_params, 0.4, x)));
    }
    CHECK(worst < 5e-4);
}

TEST_CASE("s_op1 closed form vs direct kernel quadrature") {
    // brute-force the x-space kernel integral h = mu d/dx p
    const double t = 0.4, x = std::log(85.0);
    const double sig = base_params.sigma, mu = base_params.mu();
    const double lk = base_contract.log_barrier();
    const PayoffSpec payoff = base_payoff();
    const double brute = adaptive_simpson(
        [&](double y) {
            const double v = sig * sig * t;
            const double p = std::exp(-0.5 * (x - y) * (x - y) / v) /
                             std::sqrt(2.0 * M_PI * v);
            return -mu * ((x - y) / v) * p * payoff_pi(payoff, y);
        },
        x - 10 * sig * std::sqrt(t), x + 12 * sig * std::sqrt(t), 1e-12);
    CHECK(s_op1_closed_form(base_contract, base_params, t, x) ==
          doctest::Approx(brute).epsilon(1e-9));
    (void)lk;
}

TEST_CASE("s_op_n base case and order validation") {
    const GridFunction f = payoff_grid(129, 8.0);
    const GridFunction a = s_op_n(base_spec(), base_payoff(), 0.7, f, 1);
    const GridFunction b = s_op_1(base_spec(), base_payoff(), 0.7, f);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a.values()[i] == b.values()[i]);
    CHECK_THROWS_AS((void)s_op_n(base_spec(), base_payoff(), 0.7, f, 0),
                    std::domain_error);

    const GbmParams nodrift(0.5 * 0.2 * 0.2, 0.2);
    DiffusionSpec1D spec0 =
        DiffusionSpec1D::constant(nodrift, base_contract.log_barrier(), 2.4);
    const GridFunction z2 = s_op_n(spec0, base_payoff(), 0.7, f, 2, SOpConfig{12, 8.0});
    for (double v : z2.values()) CHECK(v == 0.0);
}

TEST_CASE("iterated operators obey the explicit bound chain") {
    const GridFunction f = payoff_grid();
    const DiffusionSpec1D spec = base_spec();
    const double cq = series_bound_cq_constant_model(base_params, 1.0);
    const double finf = f.sup_norm();
    const GridFunction s1 = s_op_1(spec, base_payoff(), 1.0, f);
    const GridFunction s2 = s_op_n(spec, base_payoff(), 1.0, f, 2, SOpConfig{24, 8.0});
    CHECK(s1.sup_norm() <= series_bound({cq, spec.c_b(), finf, 1.0, 1}));
    CHECK(s2.sup_norm() <= series_bound({cq, spec.c_b(), finf, 1.0, 2}));
    // each iteration shrinks the norm
    CHECK(s2.sup_norm() < s1.sup_norm());
}

TEST_CASE("series bound formula") {
    CHECK(series_bound({1.0, 0.0, 1.0, 1.0, 2}) == 0.0);
    CHECK_THROWS_AS((void)series_bound({1.0, 1.0, 1.0, 1.0, 0}),
                    std::invalid_argument);
    // N = 2 carries the Beta identity B(1/2,1/2) = pi
    const double b2 = series_bound({1.0, 1.0, 1.0, 1.0, 2});
    const double expect2 = std::pow(2.0, 5.0) * std::sqrt(M_PI) * k_half_v * k_half_v *
                           M_PI;
    CHECK(b2 == doctest::Approx(expect2).epsilon(1e-13));
    // N = 1 single-integral estimate
    const double b1 = series_bound({1.0, 1.0, 1.0, 1.0, 1});
    CHECK(b1 == doctest::Approx(std::pow(2.0, 3.5) * std::sqrt(M_PI) * k_half_v)
                    .epsilon(1e-13));

    // at unit constants the sequence peaks at N = 8 (direct evaluation of the
    // formula) and decays factorially past the turnover
    const int turn = series_bound_turnover({1.0, 1.0, 1.0, 1.0, 1}, 32);
    CHECK(turn == 8);
    double prev = series_bound({1.0, 1.0, 1.0, 1.0, turn});
    for (int n = turn + 1; n <= 64; ++n) {
        const double cur = series_bound({1.0, 1.0, 1.0, 1.0, n});
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(series_bound({1.0, 1.0, 1.0, 1.0, 60}) < 1e-6);

    // a longer horizon pushes the turnover out but never removes it
    SeriesBoundInputs big{1.0, 1.0, 1.0, 4.0, 1};
    const int turn_big = series_bound_turnover(big, 64);
    CHECK(turn_big > turn);
    CHECK(turn_big < 64);
    big.order = turn_big;
    const double peak = series_bound(big);
    big.order = turn_big + 1;
    CHECK(series_bound(big) <= peak);
}

TEST_CASE("parametrix identity residual") {
    // mu = 0: q == p and the kernel vanishes
    const GbmParams nodrift(0.5 * 0.2 * 0.2, 0.2);
    CHECK(parametrix_identity_residual(nodrift, 0.5, std::log(80.0), std::log(80.0),
                                       WeightFn::one()) == 0.0);
    // base case
    CHECK(std::abs(parametrix_identity_residual(base_params, 0.5, std::log(80.0),
                                                std::log(80.0), WeightFn::one())) <
          1e-6);
    // short-time limit
    CHECK(std::abs(parametrix_identity_residual(base_params, 1e-4, std::log(80.0),
                                                std::log(80.0), WeightFn::one())) <
          1e-6);
    CHECK_THROWS_AS(
        (void)parametrix_identity_residual(base_params, 0.0, 0.0, 0.0, WeightFn::one()),
        std::domain_error);
}

TEST_CASE("truncated hedge: exact reflection hedge at mu = 0") {
    const GbmParams nodrift(0.5 * 0.2 * 0.2, 0.2);
    McConfig cfg;
    cfg.n_paths = 50000;
    cfg.n_steps = 32;
    cfg.seed = 41;
    const double x0 = std::log(100.0);
    const auto th = truncated_hedge_value(base_contract, nodrift, base_payoff(), x0, 1,
                                          cfg);
    CHECK(th.residual.mean == 0.0);  // S^1 == 0 pathwise
    const auto ko = knockout_price_mc(base_contract, nodrift, base_payoff(), x0, cfg);
    CHECK(std::abs(th.hedge.mean - ko.mean) <=
          3.0 * std::sqrt(th.hedge.std_error * th.hedge.std_error +
                          ko.std_error * ko.std_error));
    CHECK_THROWS_AS((void)truncated_hedge_value(base_contract, nodrift, base_payoff(),
                                                x0, 3, cfg),
                    std::domain_error);
}

TEST_CASE("truncated hedge residual matches the discounted-hit quadrature") {
    // order 1: E[residual] = -int_0^T he1(T-t) dP(tau <= t)
    McConfig cfg;
    cfg.n_paths = 150000;
    cfg.n_steps = 128;
    cfg.seed = 43;
    const double x0 = std::log(100.0);
    const auto th =
        truncated_hedge_value(base_contract, base_params, base_payoff(), x0, 1, cfg);
    const FirstPassageSpec fp(x0, base_contract.log_barrier(), base_params, 1.0);
    const double analytic = adaptive_simpson(
        [&](double t) {
            const BarrierContract ct(80, 90, 1.0, t);
            return he1(ct, base_params) * first_passage_pdf(fp, t);
        },
        0.0, 1.0 - 1e-9, 1e-10);
    CHECK(std::abs(th.residual.mean + analytic) <=
          3.0 * th.residual.std_error + 2e-3);  // midpoint-of-step bias allowance
}

TEST_CASE("far barrier: hedge is the vanilla and the residual vanishes") {
    const BarrierContract far(1e-6, 90.0, 1.0, 0.6);
    const PayoffSpec payoff = PayoffSpec::call(90.0, far.log_barrier());
    McConfig cfg;
    cfg.n_paths = 30000;
    cfg.n_steps = 16;
    cfg.seed = 9;
    const double x0 = std::log(100.0);
    const auto th = truncated_hedge_value(far, base_params, payoff, x0, 1, cfg);
    CHECK(std::abs(th.residual.mean) < 1e-9);
    const auto vanilla = estimate_terminal(
        base_params, x0, 1.0, cfg,
        [](double x) { return std::max(std::exp(x) - 90.0, 0.0); });
    CHECK(std::abs(th.hedge.mean - vanilla.mean) <=
          3.0 * std::sqrt(th.hedge.std_error * th.hedge.std_error +
                          vanilla.std_error * vanilla.std_error));
}

TEST_CASE("order-2 hedge tightens the replication") {
    McConfig cfg;
    cfg.n_paths = 60000;
    cfg.n_steps = 64;
    cfg.seed = 47;
    const double x0 = std::log(100.0);
    const auto ko =
        knockout_price_mc(base_contract, base_params, base_payoff(), x0, cfg);
    const auto th1 =
        truncated_hedge_value(base_contract, base_params, base_payoff(), x0, 1, cfg);
    HedgeTableConfig tables;
    tables.grid_nodes = 129;
    tables.time_levels = 8;
    tables.s_op.time_nodes = 16;
    const auto th2 = truncated_hedge_value(base_contract, base_params, base_payoff(),
                                           x0, 2, cfg, tables);
    CHECK(std::abs(ko.mean - th2.hedge.mean) < std::abs(ko.mean - th1.hedge.mean));
    // the order-2 residual estimate is an order of magnitude below order 1
    CHECK(std::abs(th2.residual.mean) < std::abs(th1.residual.mean));
}

TEST_CASE("s_op_1 cross-checks the he2 inner integrand at the barrier") {
    // At s = tau the order-1 kernel integral evaluated at the barrier equals
    // the limiting he2 inner bracket: both reduce to
    // mu K e^{sigma^2(T-tau)/2} [N(d3) + N(d3)] / 2 ... spot-check via the
    // closed form at x = log K against the first-term integrand of he2.
    const double t = base_contract.remaining();  // T - tau = 0.4
    const double lk = base_contract.log_barrier();
    const double v = base_params.sigma * base_params.sigma * t;
    const double d3 = (std::log(80.0 / 90.0) + v) / std::sqrt(v);
    const double bracket = base_params.mu() * 80.0 * std::exp(0.5 * v) *
                           2.0 * normal_cdf(d3);
    CHECK(s_op1_closed_form(base_contract, base_params, t, lk) ==
          doctest::Approx(bracket).epsilon(1e-12));
}
