#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "timinghedge/grid.hpp"
#include "timinghedge/types.hpp"

namespace timinghedge {

// Time-homogeneous 1D diffusion dX = sigma(X) dW + mu(X) dt on a declared
// bounded evaluation interval. c_b = sup|mu/sigma| + sup|sigma'|/2 over that
// interval (dense 2048-point sample), the constant entering the kernel
// envelope. Immutable after construction.
class DiffusionSpec1D {
  public:
    DiffusionSpec1D(std::function<double(double)> sigma_fn,
                    std::function<double(double)> mu_fn, double lamperti_ref,
                    double eval_lo, double eval_hi,
                    std::function<double(double)> sigma_prime_fn = {});

    // Arithmetic model of the numerical sections: sigma, mu constant,
    // reference point at the barrier so s(log K) = 0.
    static DiffusionSpec1D constant(const GbmParams& p, double lamperti_ref,
                                    double half_width = 10.0);

    double sigma(double x) const;
    double mu(double x) const { return mu_(x); }
    double sigma_prime(double x) const;
    double lamperti_ref() const { return ref_; }
    double eval_lo() const { return lo_; }
    double eval_hi() const { return hi_; }
    double c_b() const { return c_b_; }

  private:
    std::function<double(double)> sigma_;
    std::function<double(double)> mu_;
    std::function<double(double)> sigma_prime_;
    double ref_, lo_, hi_;
    double c_b_;
};

// s(x) = int_ref^x dy / sigma(y), adaptive Simpson at 1e-10 absolute.
double lamperti_transform(const DiffusionSpec1D& spec, double x);

// Inverse of the transform on the evaluation interval (monotone bisection
// refined by Newton with s'(x) = 1/sigma(x)).
double lamperti_inverse(const DiffusionSpec1D& spec, double z);

enum class PayoffKind { call_above_barrier, digital, custom_grid };

// Payoff F with its knock-in domain D = [log K, infinity). The reflected
// construction uses theta(x) = 2 log K - x. For the projections pi / pi_perp
// the payoff must vanish on the complement of D; the call (K <= K') and the
// digital indicator do so by construction.
struct PayoffSpec {
    PayoffKind kind = PayoffKind::call_above_barrier;
    double strike = 90.0;       // K', used by the call payoff
    double log_barrier = 0.0;   // log K, the domain boundary
    std::shared_ptr<const GridFunction> table;  // custom_grid only

    static PayoffSpec call(double strike, double log_barrier);
    static PayoffSpec digital(double log_barrier);
    static PayoffSpec custom(GridFunction g, double log_barrier);

    double operator()(double x) const;
    double theta(double x) const { return 2.0 * log_barrier - x; }
};

// pi(F)(x)      = F(x) 1_{x in D} - F(theta(x)) 1_{x in D^c}
// pi_perp(F)(x) = (F(x) + F(theta(x))) 1_{x in D^c}
// so that pi(F) + pi_perp(F) = F pointwise and pi is idempotent.
double payoff_pi(const PayoffSpec& p, double x);
double payoff_pi_perp(const PayoffSpec& p, double x);

}  // namespace timinghedge
