#pragma once

#include <iosfwd>
#include <vector>

#include "timinghedge/types.hpp"

namespace timinghedge {

// Tabulated function on a strictly increasing node set (post-Lamperti
// log-price). Linear interpolation between nodes, constant beyond the span.
class GridFunction {
  public:
    GridFunction() = default;
    GridFunction(std::vector<double> nodes, std::vector<double> values);

    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }
    std::size_t size() const { return x_.size(); }

    double operator()(double x) const;
    double sup_norm() const;

    // Two-column CSV "x,value" with a header row.
    void write_csv(std::ostream& os) const;
    static GridFunction read_csv(std::istream& is);

  private:
    std::vector<double> x_;
    std::vector<double> v_;
};

// Uniform grid of n odd nodes centred on `center` so the reflection across
// the centre maps nodes onto nodes exactly.
GridFunction make_centered_grid(double center, double half_width, std::size_t n,
                                const std::function<double(double)>& f);

// Function of (t, x) stored as time slices over a shared spatial grid;
// bilinear interpolation, constant extrapolation in both directions.
class TimeSlices {
  public:
    TimeSlices() = default;
    TimeSlices(std::vector<double> times, std::vector<GridFunction> slices);

    double operator()(double t, double x) const;
    const std::vector<double>& times() const { return t_; }
    const std::vector<GridFunction>& slices() const { return s_; }

  private:
    std::vector<double> t_;
    std::vector<GridFunction> s_;
};

}  // namespace timinghedge
