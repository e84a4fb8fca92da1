#include "timinghedge/parametrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "timinghedge/montecarlo.hpp"
#include "timinghedge/numerics.hpp"

namespace timinghedge {

namespace {

// pi(f) restricted to one linear piece of the interpolant, as g(y) = a + b y.
struct LinearPiece {
    double a, b;
};

// Evaluates pi(f) pieces around a barrier-located breakpoint set. yb is the
// barrier in grid coordinates; values below yb are the negated mirror of the
// interpolant above.
class PiPieces {
  public:
    PiPieces(const GridFunction& f, double yb) : f_(f), yb_(yb) {}

    LinearPiece piece_at(double ym) const {
        if (ym >= yb_) return interp_piece(ym, false);
        // pi(f)(y) = -f(2 yb - y): substitute through the mirrored cell.
        return interp_piece(2.0 * yb_ - ym, true);
    }

    // Breakpoints of pi(f) inside [lo, hi]: grid nodes, mirrored grid nodes
    // and the barrier itself.
    void breakpoints(double lo, double hi, std::vector<double>& out) const {
        out.clear();
        out.push_back(lo);
        out.push_back(hi);
        if (yb_ > lo && yb_ < hi) out.push_back(yb_);
        const auto& xs = f_.nodes();
        for (double xn : xs) {
            if (xn > lo && xn < hi && xn >= yb_) out.push_back(xn);
            const double xm = 2.0 * yb_ - xn;
            if (xm > lo && xm < hi && xm < yb_) out.push_back(xm);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }

  private:
    // Linear coefficients of the interpolant cell containing yq, returned in
    // the original variable y: plain f(y) = a + b y, or the mirrored piece
    // -f(2 yb - y) when `mirrored`.
    LinearPiece interp_piece(double yq, bool mirrored) const {
        const auto& xs = f_.nodes();
        const auto& vs = f_.values();
        double a, b;
        if (yq <= xs.front()) {
            a = vs.front();
            b = 0.0;
        } else if (yq >= xs.back()) {
            a = vs.back();
            b = 0.0;
        } else {
            const auto it = std::upper_bound(xs.begin(), xs.end(), yq);
            const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
            b = (vs[j + 1] - vs[j]) / (xs[j + 1] - xs[j]);
            a = vs[j] - b * xs[j];
        }
        if (!mirrored) return {a, b};
        return {-(a + b * 2.0 * yb_), b};
    }

    const GridFunction& f_;
    double yb_;
};

// int_{z0}^{z1} (z/t) phi_t(z) dz and int (z^2/t) phi_t(z) dz building blocks,
// phi_t the N(0,t) density.
struct CellMoments {
    double i1, i2;
};

CellMoments gauss_cell_moments(double t, double z0, double z1) {
    const double sd = std::sqrt(t);
    const double p0 = normal_pdf(z0 / sd) / sd;
    const double p1 = normal_pdf(z1 / sd) / sd;
    CellMoments m;
    m.i1 = -(p1 - p0);
    m.i2 = (z0 * p0 - z1 * p1) + (normal_cdf(z1 / sd) - normal_cdf(z0 / sd));
    return m;
}

struct SOpWorkspace {
    double yb;                       // barrier in grid coordinates
    std::vector<double> prefactor;   // kernel prefactor at each grid node
};

SOpWorkspace make_workspace(const DiffusionSpec1D& spec, const PayoffSpec& payoff,
                            const GridFunction& f) {
    SOpWorkspace w;
    w.yb = lamperti_transform(spec, payoff.log_barrier);
    w.prefactor.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double xi = lamperti_inverse(spec, f.nodes()[i]);
        w.prefactor[i] = -spec.mu(xi) / spec.sigma(xi) + 0.5 * spec.sigma_prime(xi);
    }
    return w;
}

GridFunction s_op_1_impl(const SOpWorkspace& w, double t, const GridFunction& f,
                         const SOpConfig& cfg) {
    if (!(t > 0.0)) throw std::domain_error("s_op_1: t must be > 0");
    const PiPieces pi(f, w.yb);
    const double reach = cfg.window_std * std::sqrt(t);
    std::vector<double> out(f.size(), 0.0);
    std::vector<double> bps;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.nodes()[i];
        pi.breakpoints(x - reach, x + reach, bps);
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < bps.size(); ++j) {
            const double ya = bps[j], ybp = bps[j + 1];
            const LinearPiece g = pi.piece_at(0.5 * (ya + ybp));
            // integrand: (x - y)/t phi_t(x - y) (a + b y); z = y - x
            const double g0 = g.a + g.b * x;
            const double g1 = g.b;
            const auto m = gauss_cell_moments(t, ya - x, ybp - x);
            acc += -(g0 * m.i1 + g1 * m.i2);
        }
        out[i] = w.prefactor[i] * acc;
    }
    return GridFunction(f.nodes(), std::move(out));
}

GridFunction s_op_n_impl(const SOpWorkspace& w, double t, const GridFunction& f,
                         int order, const SOpConfig& cfg) {
    if (order < 1) throw std::domain_error("s_op_n: order must be >= 1");
    if (!(t > 0.0)) throw std::domain_error("s_op_n: t must be > 0");
    if (order == 1) return s_op_1_impl(w, t, f, cfg);
    const auto& gl = gauss_legendre(cfg.time_nodes);
    const double vmax = std::sqrt(t);
    std::vector<double> acc(f.size(), 0.0);
    for (std::size_t a = 0; a < cfg.time_nodes; ++a) {
        const double v = 0.5 * vmax * (gl.nodes[a] + 1.0);
        const double wv = 0.5 * vmax * gl.weights[a] * 2.0 * v;
        const double s = v * v;
        if (!(s > 0.0) || !(t - s > 0.0)) continue;
        const GridFunction inner = s_op_n_impl(w, t - s, f, order - 1, cfg);
        const GridFunction outer = s_op_1_impl(w, s, inner, cfg);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += wv * outer.values()[i];
    }
    return GridFunction(f.nodes(), std::move(acc));
}

}  // namespace

GridFunction s_op_1(const DiffusionSpec1D& spec, const PayoffSpec& payoff,
                    double t, const GridFunction& f, const SOpConfig& cfg) {
    return s_op_1_impl(make_workspace(spec, payoff, f), t, f, cfg);
}

GridFunction s_op_n(const DiffusionSpec1D& spec, const PayoffSpec& payoff,
                    double t, const GridFunction& f, int order,
                    const SOpConfig& cfg) {
    return s_op_n_impl(make_workspace(spec, payoff, f), t, f, order, cfg);
}

double series_bound(const SeriesBoundInputs& in) {
    in.validate();
    const int N = in.order;
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    if (N == 1)
        return std::pow(2.0, 3.5) * sqrt_pi * in.c_q * in.c_b * k_half_v * in.f_inf *
               std::sqrt(in.horizon);
    double beta_prod = 1.0;
    for (int k = 1; k <= N - 1; ++k) beta_prod *= beta_fn(0.5 * k, 0.5);
    return std::pow(2.0, 1.5 * N + 2.0) * sqrt_pi * in.c_q * std::pow(in.c_b, N) *
           std::pow(k_half_v, N) * in.f_inf * beta_prod *
           std::pow(in.horizon, 0.5 * (N - 1)) / static_cast<double>(N - 1);
}

double series_bound_cq_constant_model(const GbmParams& params, double horizon) {
    const double lam = params.mu() / params.sigma;
    return std::exp(0.5 * lam * lam * horizon) / std::sqrt(2.0 * std::numbers::pi);
}

int series_bound_turnover(SeriesBoundInputs inputs, int n_max) {
    int best = 1;
    double best_val = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        inputs.order = n;
        const double b = series_bound(inputs);
        if (b > best_val) {
            best_val = b;
            best = n;
        }
    }
    return best;
}

double parametrix_identity_residual(const GbmParams& params, double t, double x,
                                    double y, const WeightFn& psi,
                                    const IdentityQuadrature& q) {
    if (!(t > 0.0)) throw std::domain_error("parametrix_identity_residual: t <= 0");
    const double sig2 = params.sigma * params.sigma;
    const double mu = params.mu();
    const auto qdens = [&](double u, double a, double bpt) {
        const double v = sig2 * u;
        const double d = bpt - a - mu * u;
        return std::exp(-0.5 * d * d / v) / std::sqrt(2.0 * std::numbers::pi * v);
    };
    const auto pdens = [&](double u, double a, double bpt) {
        const double v = sig2 * u;
        const double d = bpt - a;
        return std::exp(-0.5 * d * d / v) / std::sqrt(2.0 * std::numbers::pi * v);
    };
    const auto hker = [&](double u, double a, double bpt) {
        const double p = pdens(u, a, bpt);
        return psi.deriv(u) * p + psi.value(u) * (-mu) * ((a - bpt) / (sig2 * u)) * p;
    };
    const double lhs = psi.value(t) * qdens(t, x, y) - psi.value(0.0) * pdens(t, x, y);

    const auto& gl = gauss_legendre(q.time_nodes);
    const auto& gz = gauss_legendre(q.space_nodes);
    double rhs = 0.0;
    for (int half = 0; half < 2; ++half) {
        const double vmax = std::sqrt(0.5 * t);
        for (std::size_t a = 0; a < q.time_nodes; ++a) {
            const double v = 0.5 * vmax * (gl.nodes[a] + 1.0);
            const double wv = 0.5 * vmax * gl.weights[a] * 2.0 * v;
            const double s = (half == 0) ? v * v : t - v * v;
            const double ts = t - s;
            if (!(s > 0.0) || !(ts > 0.0)) continue;
            // Gaussian-product posterior window keeps both endpoints resolved.
            const double v1 = sig2 * ts, m1 = x + mu * ts;
            const double v2 = sig2 * s, m2 = y;
            const double vbar = v1 * v2 / (v1 + v2);
            const double mbar = (m1 * v2 + m2 * v1) / (v1 + v2);
            const double half_w = q.trunc_std * std::sqrt(vbar);
            double zacc = 0.0;
            for (std::size_t bz = 0; bz < q.space_nodes; ++bz) {
                const double z = mbar + half_w * gz.nodes[bz];
                zacc += gz.weights[bz] * qdens(ts, x, z) * hker(s, z, y);
            }
            rhs += wv * half_w * zacc;
        }
    }
    return lhs - rhs;
}

double s_op1_closed_form(const BarrierContract& contract, const GbmParams& params,
                         double t, double x) {
    const double mu = params.mu();
    const double lk = contract.log_barrier();
    const double lkp = std::log(contract.hedge_strike);
    if (!(t > 0.0)) {
        // short-time limit of the kernel integral
        double v = 0.0;
        if (x > lkp) v += std::exp(x);
        if (2.0 * lk - x > lkp) v += std::exp(2.0 * lk - x);
        return mu * v;
    }
    const double v = params.sigma * params.sigma * t;
    const double sd = std::sqrt(v);
    return mu * (std::exp(x + 0.5 * v) * normal_cdf((x - lkp + v) / sd) +
                 std::exp(2.0 * lk - x + 0.5 * v) *
                     normal_cdf((2.0 * lk - lkp - x + v) / sd));
}

TruncatedHedge truncated_hedge_value(const BarrierContract& contract,
                                     const GbmParams& params,
                                     const PayoffSpec& payoff, double x0, int order,
                                     const McConfig& mc,
                                     const HedgeTableConfig& tables) {
    if (order != 1 && order != 2)
        throw std::domain_error("truncated_hedge_value: order must be 1 or 2");
    const double b = contract.log_barrier();
    const double T = contract.maturity;
    const double sig = params.sigma;

    // Residual integrand needs (S)^order slices; the order-2 hedge correction
    // needs (S)^1. The call payoff has S^1 in closed form, everything else is
    // tabulated on post-Lamperti slices.
    const bool call = payoff.kind == PayoffKind::call_above_barrier;
    DiffusionSpec1D spec = DiffusionSpec1D::constant(
        params, b, (tables.grid_std + 2.0) * sig * std::sqrt(T));
    const auto payoff_z = [&](double z) { return payoff(b + sig * z); };
    const GridFunction f0 = make_centered_grid(0.0, tables.grid_std * std::sqrt(T),
                                               tables.grid_nodes, payoff_z);
    const auto build_table = [&](int ord) {
        std::vector<double> ts;
        std::vector<GridFunction> slices;
        ts.push_back(0.0);
        slices.push_back(
            GridFunction(f0.nodes(), std::vector<double>(f0.size(), 0.0)));
        for (std::size_t l = 1; l <= tables.time_levels; ++l) {
            const double u =
                T * static_cast<double>(l) / static_cast<double>(tables.time_levels);
            ts.push_back(u);
            slices.push_back(s_op_n(spec, payoff, u, f0, ord, tables.s_op));
        }
        return TimeSlices(std::move(ts), std::move(slices));
    };
    std::optional<TimeSlices> table_n;  // (S)^order, residual integrand
    std::optional<TimeSlices> table_1;  // (S)^1, order-2 correction
    if (!(order == 1 && call)) table_n = build_table(order);
    if (order == 2 && !call) table_1 = build_table(1);
    const auto s_n_eval = [&](double u, double x) {
        if (order == 1 && call) return s_op1_closed_form(contract, params, u, x);
        return (*table_n)(u, (x - b) / sig);
    };
    const auto s_1_eval = [&](double u, double x) {
        if (call) return s_op1_closed_form(contract, params, u, x);
        return (*table_1)(u, (x - b) / sig);
    };

    const std::uint64_t n = mc.n_steps;
    auto res = mc_run_paths(
        params, x0, T, b, mc, 2, [&](const PathView& v, std::span<double> out) {
            const double xT = v.x[n];
            double corr = 0.0;
            double resid = 0.0;
            for (std::uint64_t j = 1; j <= n; ++j) {
                const double xj = v.x[j];
                const double w = (j == n) ? 0.5 * v.dt : v.dt;
                const double u = T - static_cast<double>(j) * v.dt;
                if (order == 2 && xj < b)
                    corr += w * (s_1_eval(u, xj) + s_1_eval(u, 2.0 * b - xj));
                const double hit_prob = 1.0 - v.surv[j];
                if (hit_prob > 0.0) resid += w * hit_prob * s_n_eval(u, xj);
            }
            out[0] = payoff_pi(payoff, xT) - corr;
            out[1] = -resid;
        });
    return {res[0], res[1]};
}

}  // namespace timinghedge
