#include "timinghedge/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "timinghedge/numerics.hpp"
#include "timinghedge/parametrix.hpp"
#include "timinghedge/rng.hpp"

namespace timinghedge {

namespace {

constexpr std::uint64_t kBatch = 8192;

struct Accum {
    std::vector<double> sum;
    std::vector<double> sumsq;
};

// Shared driver: per sampling unit (path or antithetic pair) computes n_out
// values via `unit`, accumulates batch partials, reduces in batch order.
std::vector<McEstimate> run_units(std::uint64_t n_units, unsigned n_threads,
                                  std::size_t n_out,
                                  const std::function<void(std::uint64_t, std::span<double>)>& unit) {
    const std::uint64_t n_batches = (n_units + kBatch - 1) / kBatch;
    std::vector<Accum> partial(n_batches);
    parallel_for(static_cast<std::size_t>(n_batches), n_threads, [&](std::size_t bi) {
        Accum acc;
        acc.sum.assign(n_out, 0.0);
        acc.sumsq.assign(n_out, 0.0);
        std::vector<double> out(n_out);
        const std::uint64_t lo = bi * kBatch;
        const std::uint64_t hi = std::min(n_units, lo + kBatch);
        for (std::uint64_t u = lo; u < hi; ++u) {
            std::fill(out.begin(), out.end(), 0.0);
            unit(u, out);
            for (std::size_t k = 0; k < n_out; ++k) {
                acc.sum[k] += out[k];
                acc.sumsq[k] += out[k] * out[k];
            }
        }
        partial[bi] = std::move(acc);
    });
    std::vector<McEstimate> res(n_out);
    std::vector<double> sum(n_out, 0.0), sumsq(n_out, 0.0);
    for (std::uint64_t bi = 0; bi < n_batches; ++bi)
        for (std::size_t k = 0; k < n_out; ++k) {
            sum[k] += partial[bi].sum[k];
            sumsq[k] += partial[bi].sumsq[k];
        }
    const double n = static_cast<double>(n_units);
    for (std::size_t k = 0; k < n_out; ++k) {
        const double mean = sum[k] / n;
        double var = 0.0;
        if (n_units > 1) var = std::max(0.0, (sumsq[k] - n * mean * mean) / (n - 1.0));
        res[k].mean = mean;
        res[k].std_error = std::sqrt(var / n);
        res[k].n_effective = n_units;
    }
    return res;
}

}  // namespace

std::vector<McEstimate> mc_run_paths(const GbmParams& params, double x0,
                                     double horizon,
                                     std::optional<double> barrier,
                                     const McConfig& cfg, std::size_t n_out,
                                     const PathFunctional& f) {
    cfg.validate();
    if (!(horizon > 0.0)) throw std::invalid_argument("mc_run_paths: horizon <= 0");
    const std::uint64_t n_steps = cfg.n_steps;
    const std::uint64_t n_units = cfg.antithetic ? (cfg.n_paths + 1) / 2 : cfg.n_paths;
    const double dt = horizon / static_cast<double>(n_steps);
    const double drift = params.mu() * dt;
    const double vol = params.sigma * std::sqrt(dt);
    const double bridge_coef = 2.0 / (params.sigma * params.sigma * dt);
    const PathRng rng{cfg.seed, 0};
    const int members = cfg.antithetic ? 2 : 1;

    auto unit = [&](std::uint64_t u, std::span<double> out) {
        thread_local std::vector<double> x, pc, sv, member_out;
        x.assign(n_steps + 1, 0.0);
        pc.assign(n_steps, 0.0);
        sv.assign(n_steps + 1, 1.0);
        member_out.assign(out.size(), 0.0);
        for (int m = 0; m < members; ++m) {
            const double sgn = (m == 0) ? 1.0 : -1.0;
            x[0] = x0;
            for (std::uint64_t k = 0; k < n_steps; ++k) {
                const auto d = rng.at(u, k);
                const double z = inv_normal_cdf(d.u_normal);
                x[k + 1] = x[k] + drift + vol * (sgn * z);
                if (barrier) {
                    const double a = x[k] - *barrier;
                    const double c = x[k + 1] - *barrier;
                    double p;
                    if (a <= 0.0 || c <= 0.0)
                        p = 1.0;
                    else
                        p = cfg.bridge ? std::exp(-bridge_coef * a * c) : 0.0;
                    pc[k] = p;
                    sv[k + 1] = sv[k] * (1.0 - p);
                } else {
                    pc[k] = 0.0;
                    sv[k + 1] = 1.0;
                }
            }
            PathView view{std::span<const double>(x), std::span<const double>(pc),
                          std::span<const double>(sv), dt};
            if (members == 1) {
                f(view, out);
            } else {
                std::fill(member_out.begin(), member_out.end(), 0.0);
                f(view, member_out);
                for (std::size_t k = 0; k < out.size(); ++k)
                    out[k] += 0.5 * member_out[k];
            }
        }
    };
    return run_units(n_units, cfg.n_threads, n_out, unit);
}

std::vector<double> simulate_terminal(const GbmParams& params, double x0,
                                      double horizon, const McConfig& cfg) {
    cfg.validate();
    const double m = x0 + params.mu() * horizon;
    const double sd = params.sigma * std::sqrt(horizon);
    const PathRng rng{cfg.seed, 0};
    std::vector<double> out(cfg.n_paths);
    if (cfg.antithetic) {
        for (std::uint64_t i = 0; i < cfg.n_paths; ++i) {
            const double z = inv_normal_cdf(rng.at(i / 2, 0).u_normal);
            out[i] = m + sd * ((i % 2 == 0) ? z : -z);
        }
    } else {
        for (std::uint64_t i = 0; i < cfg.n_paths; ++i)
            out[i] = m + sd * inv_normal_cdf(rng.at(i, 0).u_normal);
    }
    return out;
}

McEstimate estimate_terminal(const GbmParams& params, double x0, double horizon,
                             const McConfig& cfg,
                             const std::function<double(double)>& g) {
    cfg.validate();
    const double m = x0 + params.mu() * horizon;
    const double sd = params.sigma * std::sqrt(horizon);
    const PathRng rng{cfg.seed, 0};
    const std::uint64_t n_units = cfg.antithetic ? (cfg.n_paths + 1) / 2 : cfg.n_paths;
    auto unit = [&](std::uint64_t u, std::span<double> out) {
        const double z = inv_normal_cdf(rng.at(u, 0).u_normal);
        if (cfg.antithetic)
            out[0] = 0.5 * (g(m + sd * z) + g(m - sd * z));
        else
            out[0] = g(m + sd * z);
    };
    return run_units(n_units, cfg.n_threads, 1, unit)[0];
}

std::vector<PathHit> hitting_indicator(const GbmParams& params, double x0,
                                       double barrier, double horizon,
                                       const McConfig& cfg) {
    cfg.validate();
    if (!(x0 > barrier))
        throw std::invalid_argument("hitting_indicator: x0 must be above the barrier");
    std::vector<PathHit> hits(cfg.n_paths);
    McConfig one = cfg;
    one.antithetic = false;  // per-path output, no pairing
    std::size_t idx = 0;
    // Single-threaded fill in path order keeps the per-path records aligned.
    one.n_threads = 1;
    const double dt = horizon / static_cast<double>(cfg.n_steps);
    mc_run_paths(params, x0, horizon, barrier, one, 1,
                 [&](const PathView& v, std::span<double>) {
                     double w_time = 0.0, w_tot = 0.0;
                     for (std::size_t k = 0; k < v.p_cross.size(); ++k) {
                         const double pk = v.surv[k] * v.p_cross[k];
                         w_tot += pk;
                         w_time += pk * (static_cast<double>(k) + 0.5) * dt;
                     }
                     hits[idx].weight = w_tot;
                     hits[idx].hit_time = w_tot > 0.0 ? w_time / w_tot : horizon;
                     ++idx;
                 });
    return hits;
}

McEstimate hitting_probability_mc(const GbmParams& params, double x0,
                                  double barrier, double horizon,
                                  const McConfig& cfg) {
    if (!(x0 > barrier))
        throw std::invalid_argument("hitting_probability_mc: x0 must be above the barrier");
    auto r = mc_run_paths(params, x0, horizon, barrier, cfg, 1,
                          [](const PathView& v, std::span<double> out) {
                              out[0] = 1.0 - v.surv[v.surv.size() - 1];
                          });
    return r[0];
}

McEstimate he1_mc(const BarrierContract& contract, const GbmParams& params,
                  const McConfig& cfg) {
    cfg.validate();
    const double K = contract.barrier;
    const double kp = contract.hedge_strike;
    const double D = contract.remaining();
    const double drift = params.mu() * D;
    const double sd = params.sigma * std::sqrt(D);
    const PathRng rng{cfg.seed, 0};
    const std::uint64_t n_units = cfg.antithetic ? (cfg.n_paths + 1) / 2 : cfg.n_paths;
    // Payoff difference written in w = X - log K so the two antithetic members
    // evaluate the same exponentials with roles swapped: g(-w) = -g(w) exactly
    // when mu = 0, giving bitwise pair cancellation.
    const auto g = [K, kp](double w) {
        const double up = std::max(K * std::exp(w) - kp, 0.0);
        const double dn = std::max(K * std::exp(-w) - kp, 0.0);
        return up - dn;
    };
    auto unit = [&](std::uint64_t u, std::span<double> out) {
        const double z = inv_normal_cdf(rng.at(u, 0).u_normal);
        if (cfg.antithetic)
            out[0] = 0.5 * (g(drift + sd * z) + g(drift + sd * (-z)));
        else
            out[0] = g(drift + sd * z);
    };
    return run_units(n_units, cfg.n_threads, 1, unit)[0];
}

ReplicationStudy replication_mc(const BarrierContract& contract,
                                const GbmParams& params, const PayoffSpec& payoff,
                                double x0, const McConfig& cfg) {
    const double b = contract.log_barrier();
    const double T = contract.maturity;
    if (!(x0 > b))
        throw std::invalid_argument("replication_mc: x0 must be above the barrier");
    const std::uint64_t n = cfg.n_steps;
    // outputs: ko, hedge0, hedge1, corr, d0 = ko - hedge0, d1 = ko - hedge1
    auto res = mc_run_paths(
        params, x0, T, b, cfg, 6, [&](const PathView& v, std::span<double> out) {
            const double xT = v.x[n];
            const double ko = payoff(xT) * v.surv[n];
            const double h0 = payoff_pi(payoff, xT);
            double corr = 0.0;
            for (std::uint64_t j = 1; j <= n; ++j) {
                const double xj = v.x[j];
                if (xj >= b) continue;
                const double w = (j == n) ? 0.5 * v.dt : v.dt;
                const double u = T - static_cast<double>(j) * v.dt;
                corr += w * (s_op1_closed_form(contract, params, u, xj) +
                             s_op1_closed_form(contract, params, u, 2.0 * b - xj));
            }
            const double h1 = h0 - corr;
            out[0] = ko;
            out[1] = h0;
            out[2] = h1;
            out[3] = corr;
            out[4] = ko - h0;
            out[5] = ko - h1;
        });
    ReplicationStudy s;
    s.ko = res[0];
    s.hedge0 = res[1];
    s.hedge1 = res[2];
    s.corr = res[3];
    s.d0 = res[4];
    s.d1 = res[5];
    return s;
}

McEstimate knockout_price_mc(const BarrierContract& contract,
                             const GbmParams& params, const PayoffSpec& payoff,
                             double x0, const McConfig& cfg) {
    const double b = contract.log_barrier();
    if (!(x0 > b))
        throw std::invalid_argument("knockout_price_mc: x0 must be above the barrier");
    const std::uint64_t n = cfg.n_steps;
    auto r = mc_run_paths(params, x0, contract.maturity, b, cfg, 1,
                          [&](const PathView& v, std::span<double> out) {
                              out[0] = payoff(v.x[n]) * v.surv[n];
                          });
    return r[0];
}

McEstimate hedge_portfolio_mc(const BarrierContract& contract,
                              const GbmParams& params, const PayoffSpec& payoff,
                              double x0, int order, const McConfig& cfg) {
    if (order != 0 && order != 1)
        throw std::invalid_argument("hedge_portfolio_mc: order must be 0 or 1");
    auto s = replication_mc(contract, params, payoff, x0, cfg);
    return order == 0 ? s.hedge0 : s.hedge1;
}

}  // namespace timinghedge
