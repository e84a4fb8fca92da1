#include "timinghedge/density.hpp"

#include <cmath>
#include <numbers>

#include "timinghedge/numerics.hpp"

namespace timinghedge {

double gauss_kernel(double t, double x, double y) {
    if (!(t > 0.0)) throw std::domain_error("gauss_kernel: t must be > 0");
    const double d = x - y;
    return std::exp(-0.5 * d * d / t) / std::sqrt(2.0 * std::numbers::pi * t);
}

double kernel_h(const DiffusionSpec1D& spec, double t, double x, double y) {
    if (!(t > 0.0)) throw std::domain_error("kernel_h: t must be > 0");
    const double xi = lamperti_inverse(spec, x);
    const double pre = -spec.mu(xi) / spec.sigma(xi) + 0.5 * spec.sigma_prime(xi);
    return pre * ((x - y) / t) * gauss_kernel(t, x, y);
}

double kernel_h_bound(const DiffusionSpec1D& spec, double t) {
    if (!(t > 0.0)) throw std::domain_error("kernel_h_bound: t must be > 0");
    return spec.c_b() * std::pow(2.0, 1.5) * k_half_v / std::sqrt(t);
}

namespace {

// Cholesky A = L L^T for dim <= 4; throws if not positive definite.
struct Chol {
    MatD L;
    int d;
    double det;  // det(A)
};

Chol cholesky(const MatD& A, int d) {
    Chol c;
    c.d = d;
    c.det = 1.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) c.L.a[i][j] = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = A.a[i][j];
            for (int k = 0; k < j; ++k) s -= c.L.a[i][k] * c.L.a[j][k];
            if (i == j) {
                if (!(s > 0.0))
                    throw std::domain_error("euler_density: A(y) not positive definite");
                c.L.a[i][i] = std::sqrt(s);
                c.det *= s;
            } else {
                c.L.a[i][j] = s / c.L.a[j][j];
            }
        }
    }
    return c;
}

// Solves L w = r, returns |w|^2 = <A^{-1} r, r>.
double quad_form_inv(const Chol& c, const VecD& r) {
    VecD w{};
    for (int i = 0; i < c.d; ++i) {
        double s = r[i];
        for (int k = 0; k < i; ++k) s -= c.L.a[i][k] * w[k];
        w[i] = s / c.L.a[i][i];
    }
    double q = 0.0;
    for (int i = 0; i < c.d; ++i) q += w[i] * w[i];
    return q;
}

}  // namespace

double euler_density(const EulerDensityParams& params, double t, const VecD& x,
                     const VecD& y) {
    if (!(t > 0.0)) throw std::domain_error("euler_density: t must be > 0");
    const int d = params.dim;
    if (d < 1 || d > max_dim) throw std::domain_error("euler_density: dim must be 1..4");
    const MatD A = params.A(y);
    const VecD b = params.b(y);
    const Chol c = cholesky(A, d);
    VecD r{};
    for (int i = 0; i < d; ++i) r[i] = x[i] - y[i] - b[i] * t;
    const double q = quad_form_inv(c, r);
    const double norm =
        std::pow(2.0 * std::numbers::pi, -0.5 * d) / std::sqrt(c.det * std::pow(t, d));
    return norm * std::exp(-0.5 * q / t);
}

ReflectionHyperplane::ReflectionHyperplane(int d, const VecD& gamma_, double k_)
    : dim(d), gamma(gamma_), k(k_) {
    if (d < 1 || d > max_dim)
        throw std::domain_error("ReflectionHyperplane: dim must be 1..4");
    double n2 = 0.0;
    for (int i = 0; i < d; ++i) n2 += gamma[i] * gamma[i];
    if (std::abs(n2 - 1.0) > 1e-12)
        throw std::domain_error("ReflectionHyperplane: gamma must be a unit vector");
}

VecD ReflectionHyperplane::theta(const VecD& x) const {
    double ip = 0.0;
    for (int i = 0; i < dim; ++i) ip += x[i] * gamma[i];
    VecD out{};
    for (int i = 0; i < dim; ++i) out[i] = x[i] - 2.0 * (ip - k) * gamma[i];
    return out;
}

MatD ReflectionHyperplane::psi() const {
    MatD m;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m.a[i][j] = (i == j ? 1.0 : 0.0) - 2.0 * gamma[i] * gamma[j];
    return m;
}

double reflection_symmetry_residual(const EulerDensityParams& params,
                                    const ReflectionHyperplane& plane, double t,
                                    const VecD& x, const VecD& y) {
    double ip = 0.0;
    for (int i = 0; i < plane.dim; ++i) ip += x[i] * plane.gamma[i];
    if (std::abs(ip - plane.k) > 1e-12)
        throw std::invalid_argument(
            "reflection_symmetry_residual: x must lie on the hyperplane");
    return euler_density(params, t, x, y) - euler_density(params, t, x, plane.theta(y));
}

}  // namespace timinghedge
