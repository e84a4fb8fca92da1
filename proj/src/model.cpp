#include "timinghedge/model.hpp"

#include <algorithm>
#include <cmath>

#include "timinghedge/numerics.hpp"

namespace timinghedge {

DiffusionSpec1D::DiffusionSpec1D(std::function<double(double)> sigma_fn,
                                 std::function<double(double)> mu_fn,
                                 double lamperti_ref, double eval_lo,
                                 double eval_hi,
                                 std::function<double(double)> sigma_prime_fn)
    : sigma_(std::move(sigma_fn)),
      mu_(std::move(mu_fn)),
      sigma_prime_(std::move(sigma_prime_fn)),
      ref_(lamperti_ref),
      lo_(eval_lo),
      hi_(eval_hi) {
    if (!(lo_ < hi_)) throw std::invalid_argument("DiffusionSpec1D: empty interval");
    if (!(ref_ >= lo_ && ref_ <= hi_))
        throw std::invalid_argument("DiffusionSpec1D: lamperti_ref outside interval");
    // Dense interval-local estimate of the kernel constant.
    const int n = 2048;
    double sup_ratio = 0.0, sup_dsigma = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo_ + (hi_ - lo_) * (i + 0.5) / n;
        const double s = sigma_(x);
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::domain_error("DiffusionSpec1D: sigma must be finite and > 0");
        sup_ratio = std::max(sup_ratio, std::abs(mu_(x) / s));
        sup_dsigma = std::max(sup_dsigma, std::abs(sigma_prime(x)));
    }
    c_b_ = sup_ratio + 0.5 * sup_dsigma;
    if (!std::isfinite(c_b_)) throw std::domain_error("DiffusionSpec1D: c_b not finite");
}

DiffusionSpec1D DiffusionSpec1D::constant(const GbmParams& p, double lamperti_ref,
                                          double half_width) {
    const double s = p.sigma, m = p.mu();
    return DiffusionSpec1D([s](double) { return s; }, [m](double) { return m; },
                           lamperti_ref, lamperti_ref - half_width,
                           lamperti_ref + half_width, [](double) { return 0.0; });
}

double DiffusionSpec1D::sigma(double x) const {
    const double s = sigma_(x);
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::domain_error("DiffusionSpec1D: sigma not finite/positive at x");
    return s;
}

double DiffusionSpec1D::sigma_prime(double x) const {
    if (sigma_prime_) return sigma_prime_(x);
    const double h = 1e-6;
    return (sigma_(x + h) - sigma_(x - h)) / (2.0 * h);
}

double lamperti_transform(const DiffusionSpec1D& spec, double x) {
    if (spec.lamperti_ref() == x) return 0.0;
    return adaptive_simpson([&spec](double y) { return 1.0 / spec.sigma(y); },
                            spec.lamperti_ref(), x, 1e-10);
}

double lamperti_inverse(const DiffusionSpec1D& spec, double z) {
    double lo = spec.eval_lo(), hi = spec.eval_hi();
    const double slo = lamperti_transform(spec, lo);
    const double shi = lamperti_transform(spec, hi);
    if (z <= slo) return lo;
    if (z >= shi) return hi;
    double x = lo + (hi - lo) * (z - slo) / (shi - slo);
    const double tol = 2e-10 * (1.0 + std::abs(z));
    for (int it = 0; it < 200; ++it) {
        const double err = lamperti_transform(spec, x) - z;
        if (std::abs(err) < tol) return x;
        if (err > 0.0)
            hi = x;
        else
            lo = x;
        double next = x - err * spec.sigma(x);  // Newton: s'(x) = 1/sigma
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
        if (hi - lo < 1e-14 * (1.0 + std::abs(x))) return x;
    }
    return x;
}

PayoffSpec PayoffSpec::call(double strike, double log_barrier) {
    PayoffSpec p;
    p.kind = PayoffKind::call_above_barrier;
    p.strike = strike;
    p.log_barrier = log_barrier;
    if (!(std::log(strike) >= log_barrier))
        throw std::domain_error("PayoffSpec::call: strike below barrier (K' < K)");
    return p;
}

PayoffSpec PayoffSpec::digital(double log_barrier) {
    PayoffSpec p;
    p.kind = PayoffKind::digital;
    p.strike = 0.0;
    p.log_barrier = log_barrier;
    return p;
}

PayoffSpec PayoffSpec::custom(GridFunction g, double log_barrier) {
    PayoffSpec p;
    p.kind = PayoffKind::custom_grid;
    p.strike = 0.0;
    p.log_barrier = log_barrier;
    p.table = std::make_shared<GridFunction>(std::move(g));
    return p;
}

double PayoffSpec::operator()(double x) const {
    switch (kind) {
        case PayoffKind::call_above_barrier:
            return std::max(std::exp(x) - strike, 0.0);
        case PayoffKind::digital:
            return x >= log_barrier ? 1.0 : 0.0;
        case PayoffKind::custom_grid:
            return (*table)(x);
    }
    return 0.0;
}

double payoff_pi(const PayoffSpec& p, double x) {
    if (x >= p.log_barrier) return p(x);
    return -p(p.theta(x));
}

double payoff_pi_perp(const PayoffSpec& p, double x) {
    if (x >= p.log_barrier) return 0.0;
    return p(x) + p(p.theta(x));
}

}  // namespace timinghedge
