#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "timinghedge/density.hpp"
#include "timinghedge/numerics.hpp"

using namespace timinghedge;

TEST_CASE("gauss kernel normalisation and chapman-kolmogorov") {
    CHECK_THROWS_AS((void)gauss_kernel(0.0, 0.0, 0.0), std::domain_error);
    for (double t : {0.01, 0.1, 1.0}) {
        const double mass = integrate_gl(
            [t](double y) { return gauss_kernel(t, 0.3, y); }, 0.3 - 12 * std::sqrt(t),
            0.3 + 12 * std::sqrt(t), 128);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
    const double t = 0.8, s = 0.3, x = 0.1, y = -0.4;
    const double conv = integrate_gl(
        [&](double z) { return gauss_kernel(s, x, z) * gauss_kernel(t - s, z, y); },
        -12.0, 12.0, 256);
    CHECK(conv == doctest::Approx(gauss_kernel(t, x, y)).epsilon(1e-10));
}

TEST_CASE("kernel h trivial zeros") {
    DiffusionSpec1D driftless([](double) { return 1.0; }, [](double) { return 0.0; },
                              0.0, -5.0, 5.0);
    for (double t : {0.1, 0.5})
        for (double x : {-1.0, 0.2})
            CHECK(kernel_h(driftless, t, x, x + 0.3) == 0.0);
    const GbmParams p(0.03, 0.2);
    DiffusionSpec1D model = DiffusionSpec1D::constant(p, 0.0, 5.0);
    CHECK(kernel_h(model, 0.7, 0.4, 0.4) == 0.0);  // (x - y) factor
    CHECK_THROWS_AS((void)kernel_h(model, 0.0, 0.0, 0.1), std::domain_error);
}

TEST_CASE("kernel h spot value by direct arithmetic") {
    const GbmParams p(0.03, 0.2);  // mu/sigma = 0.05
    DiffusionSpec1D model = DiffusionSpec1D::constant(p, 0.0, 5.0);
    const double t = 0.5, x = 0.0, y = 0.1;
    const double expect = -(p.mu() / p.sigma) * ((x - y) / t) *
                          std::exp(-0.5 * (x - y) * (x - y) / t) /
                          std::sqrt(2.0 * std::numbers::pi * t);
    CHECK(kernel_h(model, t, x, y) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("kernel h bound and envelope sweep") {
    DiffusionSpec1D driftless([](double) { return 1.0; }, [](double) { return 0.0; },
                              0.0, -5.0, 5.0);
    CHECK(kernel_h_bound(driftless, 0.4) == 0.0);  // c_b = 0
    DiffusionSpec1D unit_cb([](double) { return 1.0; }, [](double) { return 1.0; },
                            0.0, -5.0, 5.0);
    CHECK(unit_cb.c_b() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(kernel_h_bound(unit_cb, 1.0) ==
          doctest::Approx(std::pow(2.0, 1.5) * k_half_v).epsilon(1e-13));

    const GbmParams p(0.03, 0.2);
    DiffusionSpec1D model = DiffusionSpec1D::constant(p, 0.0, 5.0);
    oracles::Xorshift rng(13);
    for (int i = 0; i < 10000; ++i) {
        const double t = rng.uniform(0.01, 2.0);
        const double x = rng.uniform(-3.0, 3.0);
        const double y = rng.uniform(-3.0, 3.0);
        CHECK(std::abs(kernel_h(model, t, x, y)) <=
              kernel_h_bound(model, t) * gauss_kernel(2.0 * t, x, y) * (1 + 1e-12));
    }
}

TEST_CASE("euler density closed-form cases") {
    EulerDensityParams p1;
    p1.dim = 1;
    p1.A = [](const VecD&) { MatD m; m.a[0][0] = 1.0; return m; };
    p1.b = [](const VecD&) { return VecD{}; };
    CHECK(euler_density(p1, 1.0, VecD{0.3}, VecD{0.3}) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK_THROWS_AS((void)euler_density(p1, 0.0, VecD{}, VecD{}), std::domain_error);

    EulerDensityParams p2;
    p2.dim = 2;
    p2.A = [](const VecD&) {
        MatD m;
        m.a[0][0] = 1.0; m.a[1][1] = 1.0; m.a[0][1] = m.a[1][0] = 0.0;
        return m;
    };
    p2.b = [](const VecD&) { return VecD{}; };
    const VecD x{0.2, -0.4}, y{-0.1, 0.5};
    const double prod = gauss_kernel(0.7, x[0], y[0]) * gauss_kernel(0.7, x[1], y[1]);
    CHECK(euler_density(p2, 0.7, x, y) == doctest::Approx(prod).epsilon(1e-13));

    // diag(1,4): hand-computed quadratic form
    EulerDensityParams p3 = p2;
    p3.A = [](const VecD&) {
        MatD m;
        m.a[0][0] = 1.0; m.a[1][1] = 4.0; m.a[0][1] = m.a[1][0] = 0.0;
        return m;
    };
    const double t = 0.5;
    const double q = (x[0] - y[0]) * (x[0] - y[0]) / 1.0 +
                     (x[1] - y[1]) * (x[1] - y[1]) / 4.0;
    const double expect = std::exp(-0.5 * q / t) /
                          (2.0 * std::numbers::pi * std::sqrt(4.0 * t * t));
    CHECK(euler_density(p3, t, x, y) == doctest::Approx(expect).epsilon(1e-13));

    EulerDensityParams bad = p2;
    bad.A = [](const VecD&) {
        MatD m;
        m.a[0][0] = 1.0; m.a[1][1] = -1.0; m.a[0][1] = m.a[1][0] = 0.0;
        return m;
    };
    CHECK_THROWS_AS((void)euler_density(bad, 1.0, x, y), std::domain_error);
}

TEST_CASE("euler density integrates to one (d = 1, drifted)") {
    EulerDensityParams p;
    p.dim = 1;
    p.A = [](const VecD&) { MatD m; m.a[0][0] = 0.8; return m; };
    p.b = [](const VecD&) { return VecD{0.3}; };
    const double t = 0.6;
    const VecD y{0.1};
    const double mass = integrate_gl(
        [&](double xv) { return euler_density(p, t, VecD{xv}, y); }, -12.0, 12.0, 256);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("reflection hyperplane geometry") {
    CHECK_THROWS_AS(ReflectionHyperplane(2, VecD{0.5, 0.0}, 0.0), std::domain_error);
    const ReflectionHyperplane plane(2, VecD{1.0, 0.0}, 0.3);
    oracles::Xorshift rng(21);
    for (int i = 0; i < 200; ++i) {
        VecD a{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        VecD b{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const VecD ta = plane.theta(a), tta = plane.theta(ta);
        CHECK(tta[0] == doctest::Approx(a[0]).epsilon(1e-14));
        CHECK(tta[1] == doctest::Approx(a[1]).epsilon(1e-14));
        const VecD tb = plane.theta(b);
        const double d0 = std::hypot(a[0] - b[0], a[1] - b[1]);
        const double d1 = std::hypot(ta[0] - tb[0], ta[1] - tb[1]);
        CHECK(d1 == doctest::Approx(d0).epsilon(1e-13));
    }
    const VecD on{0.3, 1.7};
    const VecD fixed = plane.theta(on);
    CHECK(fixed[0] == doctest::Approx(on[0]).epsilon(1e-15));
    CHECK(fixed[1] == doctest::Approx(on[1]).epsilon(1e-15));
}

TEST_CASE("reflection symmetry residual") {
    const ReflectionHyperplane plane(2, VecD{1.0, 0.0}, 0.0);
    const VecD x{0.0, 0.4};  // on the plane
    const VecD y{0.7, -0.2};

    EulerDensityParams iso;
    iso.dim = 2;
    iso.A = [](const VecD&) {
        MatD m;
        m.a[0][0] = m.a[1][1] = 1.0; m.a[0][1] = m.a[1][0] = 0.0;
        return m;
    };
    iso.b = [](const VecD&) { return VecD{}; };
    CHECK(std::abs(reflection_symmetry_residual(iso, plane, 0.5, x, y)) <= 1e-15);

    // diag(a1, a2) with b = (0, b2): Psi A Psi = A and Psi b = b
    EulerDensityParams diag = iso;
    diag.A = [](const VecD&) {
        MatD m;
        m.a[0][0] = 0.7; m.a[1][1] = 2.3; m.a[0][1] = m.a[1][0] = 0.0;
        return m;
    };
    diag.b = [](const VecD&) { return VecD{0.0, 0.4}; };
    CHECK(std::abs(reflection_symmetry_residual(diag, plane, 0.5, x, y)) <= 1e-15);

    // b = (b1, 0), b1 != 0 breaks the symmetry detectably
    EulerDensityParams broken = diag;
    broken.b = [](const VecD&) { return VecD{0.25, 0.0}; };
    CHECK(std::abs(reflection_symmetry_residual(broken, plane, 0.5, x, y)) > 1e-4);

    const VecD off{0.1, 0.4};
    CHECK_THROWS_AS(
        (void)reflection_symmetry_residual(iso, plane, 0.5, off, y),
        std::invalid_argument);
}
