#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "timinghedge/grid.hpp"

using namespace timinghedge;

namespace {
GridFunction ramp_grid() {
    std::vector<double> x, v;
    for (int i = 0; i < 21; ++i) {
        x.push_back(-1.0 + 0.1 * i);
        v.push_back(std::sin(x.back()));
    }
    return GridFunction(x, v);
}
}  // namespace

TEST_CASE("GridFunction validation") {
    std::vector<double> x{0, 1, 2}, v{0, 1, 2};
    CHECK_THROWS_AS(GridFunction(x, v), std::invalid_argument);  // too few nodes
    std::vector<double> x16(16), v16(16, 0.0);
    for (int i = 0; i < 16; ++i) x16[i] = i;
    x16[7] = x16[6];
    CHECK_THROWS_AS(GridFunction(x16, v16), std::invalid_argument);
    x16[7] = 6.5;
    v16[3] = std::nan("");
    CHECK_THROWS_AS(GridFunction(x16, v16), std::invalid_argument);
    v16[3] = 0.0;
    CHECK_NOTHROW(GridFunction(x16, v16));
}

TEST_CASE("GridFunction interpolation and extrapolation") {
    const GridFunction g = ramp_grid();
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(g(g.nodes()[i]) == g.values()[i]);
    // linear between nodes
    CHECK(g(-0.95) == doctest::Approx(0.5 * (g.values()[0] + g.values()[1])));
    // constant beyond the span
    CHECK(g(-5.0) == g.values().front());
    CHECK(g(5.0) == g.values().back());
}

TEST_CASE("GridFunction csv round trip is bit exact") {
    oracles::Xorshift rng(3);
    std::vector<double> x, v;
    double cur = -2.0;
    for (int i = 0; i < 40; ++i) {
        cur += rng.uniform(1e-3, 0.3);
        x.push_back(cur);
        v.push_back(rng.uniform(-1e6, 1e6));
    }
    const GridFunction g(x, v);
    std::stringstream ss;
    g.write_csv(ss);
    const GridFunction h = GridFunction::read_csv(ss);
    REQUIRE(h.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(h.nodes()[i] == g.nodes()[i]);
        CHECK(h.values()[i] == g.values()[i]);
    }
}

TEST_CASE("make_centered_grid mirrors nodes exactly") {
    const GridFunction g =
        make_centered_grid(0.7, 2.0, 33, [](double x) { return x; });
    const std::size_t c = g.size() / 2;
    CHECK(g.nodes()[c] == 0.7);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double mirrored = 2.0 * 0.7 - g.nodes()[i];
        CHECK(g.nodes()[g.size() - 1 - i] == doctest::Approx(mirrored).epsilon(1e-15));
    }
    CHECK_THROWS_AS(make_centered_grid(0, 1, 32, [](double) { return 0.0; }),
                    std::invalid_argument);
}

TEST_CASE("TimeSlices bilinear interpolation") {
    auto mk = [](double scale) {
        std::vector<double> x, v;
        for (int i = 0; i < 17; ++i) {
            x.push_back(i * 0.25);
            v.push_back(scale * x.back());
        }
        return GridFunction(x, v);
    };
    TimeSlices ts({0.0, 1.0}, {mk(1.0), mk(3.0)});
    CHECK(ts(0.0, 2.0) == doctest::Approx(2.0));
    CHECK(ts(1.0, 2.0) == doctest::Approx(6.0));
    CHECK(ts(0.5, 2.0) == doctest::Approx(4.0));
    CHECK(ts(-1.0, 2.0) == doctest::Approx(2.0));  // constant beyond span
    CHECK(ts(9.0, 2.0) == doctest::Approx(6.0));
}
