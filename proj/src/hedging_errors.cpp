#include "timinghedge/hedging_errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "timinghedge/numerics.hpp"

namespace timinghedge {

namespace {

struct D12 {
    double d1, d2, sd;  // sd = sigma sqrt(T - tau)
};

D12 d_args(const BarrierContract& c, const GbmParams& p) {
    if (!(c.remaining() > 0.0)) throw std::domain_error("hedging error: tau >= T");
    const double D = c.remaining();
    const double sd = p.sigma * std::sqrt(D);
    const double lkk = std::log(c.barrier / c.hedge_strike);
    const double mu = p.mu();
    return {(lkk - mu * D) / sd, (lkk + mu * D) / sd, sd};
}

}  // namespace

double he1(const BarrierContract& contract, const GbmParams& params,
           bool discounted) {
    const auto [d1, d2, sd] = d_args(contract, params);
    const double D = contract.remaining();
    const double mu = params.mu();
    const double K = contract.barrier, Kp = contract.hedge_strike;
    const double val =
        Kp * (normal_cdf(d1) - normal_cdf(d2)) +
        K * std::exp(0.5 * params.sigma * params.sigma * D) *
            (std::exp(mu * D) * normal_cdf(d2 + sd) -
             std::exp(-mu * D) * normal_cdf(d1 + sd));
    return discounted ? std::exp(-params.r * D) * val : val;
}

He1Components he1_components(const BarrierContract& contract,
                             const GbmParams& params) {
    const auto [d1, d2, sd] = d_args(contract, params);
    const double D = contract.remaining();
    const double mu = params.mu();
    const double s2h = 0.5 * params.sigma * params.sigma;
    const double K = contract.barrier, Kp = contract.hedge_strike;
    He1Components out;
    out.first = K * std::exp((s2h + mu) * D) * normal_cdf(d2 + sd) - Kp * normal_cdf(d2);
    out.second = K * std::exp((s2h - mu) * D) * normal_cdf(d1 + sd) - Kp * normal_cdf(d1);
    return out;
}

He2Result he2(const BarrierContract& contract, const GbmParams& params,
              const He2Quadrature& q, bool discounted) {
    q.validate();
    if (!(contract.remaining() > 0.0)) throw std::domain_error("he2: tau >= T");
    const double K = contract.barrier, Kp = contract.hedge_strike;
    const double T = contract.maturity, tau = contract.hit_time;
    const double sig = params.sigma, mu = params.mu();
    const double lkk = std::log(K / Kp);
    const double common = mu * K * std::exp(0.5 * sig * sig * (T - tau));

    // u-centres (mu +- sigma^2)(s - tau) and sign of u inside N(...) per term;
    // terms 1,2 integrate over u > 0, terms 3,4 over u < 0.
    static constexpr double drift_sign[4] = {+1.0, -1.0, -1.0, +1.0};
    static constexpr double u_sign[4] = {+1.0, -1.0, -1.0, +1.0};
    static constexpr double outer_sign[4] = {+1.0, +1.0, -1.0, -1.0};
    static constexpr bool upper_half[4] = {true, true, false, false};

    const auto& glo = gauss_legendre(q.outer_nodes);
    const auto& gli = gauss_legendre(q.inner_nodes);
    const double vmax = std::sqrt(T - tau);

    He2Result res;
    double total = 0.0;
    for (std::size_t a = 0; a < q.outer_nodes; ++a) {
        const double v = 0.5 * vmax * (glo.nodes[a] + 1.0);
        const double ws = 0.5 * vmax * glo.weights[a] * 2.0 * v;  // ds = 2v dv
        const double dtu = v * v;                                 // s - tau
        const double s = tau + dtu;
        const double vbar = sig * sig * (T - s);
        const double sdT = std::sqrt(std::max(vbar, 1e-300));
        const double d3 = (lkk + vbar) / sdT;
        const double sdu = sig * std::sqrt(dtu);
        const double inv_sdu = 1.0 / sdu;
        const double dens_norm = 1.0 / (sdu * std::sqrt(2.0 * std::numbers::pi));
        for (int term = 0; term < 4; ++term) {
            const double m = (mu + drift_sign[term] * sig * sig) * dtu;
            double lo = m - q.trunc_std * sdu;
            double hi = m + q.trunc_std * sdu;
            if (upper_half[term])
                lo = std::max(lo, 0.0);
            else
                hi = std::min(hi, 0.0);
            if (!(lo < hi)) continue;
            double inner = 0.0;
            const double c = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
            for (std::size_t bnode = 0; bnode < q.inner_nodes; ++bnode) {
                const double u = mid + c * gli.nodes[bnode];
                const double zz = (u - m) * inv_sdu;
                const double dens = dens_norm * std::exp(-0.5 * zz * zz);
                inner += gli.weights[bnode] * normal_cdf(d3 + u_sign[term] * u / sdT) * dens;
            }
            inner *= c;
            const double contrib = ws * outer_sign[term] *
                                   std::exp(drift_sign[term] * mu * dtu) * inner;
            res.components[static_cast<std::size_t>(term)] += common * contrib;
            total += common * contrib;
        }
    }
    res.total = total;
    double comp_sum = 0.0;
    for (double cv : res.components) comp_sum += cv;
    const double scale = std::max(1.0, std::abs(res.total));
    if (std::abs(comp_sum - res.total) > 1e-10 * scale)
        throw std::runtime_error("he2: component/total consistency broken");
    if (discounted) {
        const double df = std::exp(-params.r * contract.remaining());
        res.total *= df;
        for (auto& cv : res.components) cv *= df;
    }
    return res;
}

double ratio_gamma(const BarrierContract& contract, const GbmParams& params,
                   const He2Quadrature& q) {
    const double h1 = he1(contract, params);
    if (std::abs(h1) < 1e-12)
        throw UndefinedRatioError("ratio_gamma: |He1| below 1e-12 floor");
    return he2(contract, params, q).total / h1;
}

const char* surface_kind_name(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::first: return "first";
        case SurfaceKind::second: return "second";
        case SurfaceKind::ratio: return "ratio";
    }
    return "?";
}

void ErrorSurface::write_csv(std::ostream& os) const {
    os << "kprime,sigma,value,kind\n";
    const char* kn = surface_kind_name(kind);
    char buf[128];
    for (std::size_t i = 0; i < kprime_axis.size(); ++i)
        for (std::size_t j = 0; j < sigma_axis.size(); ++j) {
            const double v = is_defined(i, j)
                                 ? at(i, j)
                                 : std::numeric_limits<double>::quiet_NaN();
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%s\n", kprime_axis[i],
                          sigma_axis[j], v, kn);
            os << buf;
        }
}

ErrorSurface sweep_surface(SurfaceKind kind, const std::vector<double>& kprime_axis,
                           const std::vector<double>& sigma_axis,
                           const SweepFixed& fixed, const He2Quadrature& q,
                           unsigned n_threads) {
    if (kprime_axis.empty() || sigma_axis.empty())
        throw std::invalid_argument("sweep_surface: empty axis");
    for (std::size_t i = 0; i + 1 < kprime_axis.size(); ++i)
        if (!(kprime_axis[i] < kprime_axis[i + 1]))
            throw std::invalid_argument("sweep_surface: kprime axis not increasing");
    for (std::size_t j = 0; j + 1 < sigma_axis.size(); ++j)
        if (!(sigma_axis[j] < sigma_axis[j + 1]))
            throw std::invalid_argument("sweep_surface: sigma axis not increasing");
    ErrorSurface surf;
    surf.kind = kind;
    surf.kprime_axis = kprime_axis;
    surf.sigma_axis = sigma_axis;
    const std::size_t nk = kprime_axis.size(), ns = sigma_axis.size();
    surf.values.assign(nk * ns, 0.0);
    surf.defined.assign(nk * ns, 1);
    parallel_for(nk * ns, n_threads, [&](std::size_t cell) {
        const std::size_t i = cell / ns, j = cell % ns;
        const BarrierContract c(fixed.barrier, kprime_axis[i], fixed.maturity,
                                fixed.hit_time);
        const GbmParams p(fixed.r, sigma_axis[j]);
        switch (kind) {
            case SurfaceKind::first:
                surf.values[cell] = he1(c, p);
                break;
            case SurfaceKind::second:
                surf.values[cell] = he2(c, p, q).total;
                break;
            case SurfaceKind::ratio:
                try {
                    surf.values[cell] = ratio_gamma(c, p, q);
                } catch (const UndefinedRatioError&) {
                    surf.values[cell] = std::numeric_limits<double>::quiet_NaN();
                    surf.defined[cell] = 0;
                }
                break;
        }
    });
    return surf;
}

}  // namespace timinghedge
