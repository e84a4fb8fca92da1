#pragma once

#include <array>
#include <functional>

#include "timinghedge/model.hpp"
#include "timinghedge/types.hpp"

namespace timinghedge {

// Unit-diffusion heat kernel p^pi(t,x,y) = (2 pi t)^{-1/2} exp(-(x-y)^2/2t).
double gauss_kernel(double t, double x, double y);

// Parametrix defect kernel of the Lamperti-transformed diffusion:
//   h(t,x,y) = { -mu(s^{-1}(x))/sigma(s^{-1}(x)) + sigma'(s^{-1}(x))/2 }
//              * (x-y)/t * p^pi(t,x,y),
// with x, y post-Lamperti.
double kernel_h(const DiffusionSpec1D& spec, double t, double x, double y);

// Envelope constant: |h(t,x,y)| <= c_b 2^{3/2} K_{1/2} t^{-1/2} p^pi(2t,x,y).
double kernel_h_bound(const DiffusionSpec1D& spec, double t);

// --- d-dimensional pieces (d <= 4, dense linear algebra) ---

inline constexpr int max_dim = 4;
using VecD = std::array<double, max_dim>;
struct MatD {
    std::array<std::array<double, max_dim>, max_dim> a{};
};

// Frozen-coefficient Euler density parameters: x -> A(x) symmetric positive
// definite, x -> b(x).
struct EulerDensityParams {
    int dim = 2;
    std::function<MatD(const VecD&)> A;
    std::function<VecD(const VecD&)> b;
};

// p^{A,b}_t(x,y) = (2 pi)^{-d/2} (det A(y) t)^{-1/2}
//                  exp(-<A(y)^{-1}(x-y-b(y)t), x-y-b(y)t>/2t).
double euler_density(const EulerDensityParams& params, double t, const VecD& x,
                     const VecD& y);

// Reflection across the hyperplane <x, gamma> = k:
// theta(x) = Psi x + 2 k gamma with Psi = I - 2 gamma (x) gamma.
struct ReflectionHyperplane {
    int dim = 2;
    VecD gamma{};
    double k = 0.0;

    ReflectionHyperplane(int d, const VecD& gamma_, double k_);
    VecD theta(const VecD& x) const;
    MatD psi() const;
};

// q(t,x,y) - q(t,x,theta(y)) for x on the hyperplane; zero (to roundoff)
// whenever A(x) = Psi A(theta(x)) Psi and b(x) = Psi b(theta(x)).
double reflection_symmetry_residual(const EulerDensityParams& params,
                                    const ReflectionHyperplane& plane, double t,
                                    const VecD& x, const VecD& y);

}  // namespace timinghedge
