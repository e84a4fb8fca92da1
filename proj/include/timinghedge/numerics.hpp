#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "timinghedge/types.hpp"

namespace timinghedge {

// Standard normal CDF via erfc, full double accuracy. Arguments beyond
// |z| = 38 saturate to {0, 1}.
double normal_cdf(double z);
double normal_pdf(double z);

// Inverse standard normal CDF (Wichura AS 241, PPND16).
double inv_normal_cdf(double p);

// K_{1/2} = sup_x x^{1/2} e^{-x}, attained at x = 1/2.
inline constexpr double k_half_v = 0.42888194248035300;

// B(a,b) via lgamma; stable for the half-integer arguments used here.
double beta_fn(double a, double b);

// Gauss-Legendre rule on [-1,1]; nodes/weights cached per n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(std::size_t n);

// Applies a cached rule mapped to [a,b].
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    std::size_t n);

// Adaptive Simpson with absolute tolerance. Throws QuadratureError with node
// diagnostics if the recursion depth is exhausted before reaching tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 48);

// Deterministic helper: runs body(i) for i in [0, n) on up to n_threads
// workers. Results must be written to disjoint slots by index.
void parallel_for(std::size_t n, unsigned n_threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace timinghedge
