#include "timinghedge/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace timinghedge {

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values)
    : x_(std::move(nodes)), v_(std::move(values)) {
    if (x_.size() < 16) throw std::invalid_argument("GridFunction: need >= 16 nodes");
    if (x_.size() != v_.size())
        throw std::invalid_argument("GridFunction: node/value size mismatch");
    for (std::size_t i = 0; i + 1 < x_.size(); ++i)
        if (!(x_[i] < x_[i + 1]))
            throw std::invalid_argument("GridFunction: nodes must be strictly increasing");
    for (double v : v_)
        if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
}

double GridFunction::operator()(double x) const {
    if (x <= x_.front()) return v_.front();
    if (x >= x_.back()) return v_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double w = (x - x_[j]) / (x_[j + 1] - x_[j]);
    return v_[j] + w * (v_[j + 1] - v_[j]);
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : v_) m = std::max(m, std::abs(v));
    return m;
}

void GridFunction::write_csv(std::ostream& os) const {
    os << "x,value\n";
    char buf[64];
    for (std::size_t i = 0; i < x_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x_[i], v_[i]);
        os << buf;
    }
}

GridFunction GridFunction::read_csv(std::istream& is) {
    std::string line;
    std::vector<double> xs, vs;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("x,", 0) == 0) continue;  // header
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("GridFunction::read_csv: malformed row: " + line);
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    return GridFunction(std::move(xs), std::move(vs));
}

GridFunction make_centered_grid(double center, double half_width, std::size_t n,
                                const std::function<double(double)>& f) {
    if (n < 17 || n % 2 == 0)
        throw std::invalid_argument("make_centered_grid: n must be odd and >= 17");
    std::vector<double> xs(n), vs(n);
    const double h = 2.0 * half_width / static_cast<double>(n - 1);
    const std::size_t c = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = center + (static_cast<double>(i) - static_cast<double>(c)) * h;
        vs[i] = f(xs[i]);
    }
    xs[c] = center;  // exact centre node
    return GridFunction(std::move(xs), std::move(vs));
}

TimeSlices::TimeSlices(std::vector<double> times, std::vector<GridFunction> slices)
    : t_(std::move(times)), s_(std::move(slices)) {
    if (t_.empty() || t_.size() != s_.size())
        throw std::invalid_argument("TimeSlices: time/slice size mismatch");
    for (std::size_t i = 0; i + 1 < t_.size(); ++i)
        if (!(t_[i] < t_[i + 1]))
            throw std::invalid_argument("TimeSlices: times must be strictly increasing");
}

double TimeSlices::operator()(double t, double x) const {
    if (t <= t_.front()) return s_.front()(x);
    if (t >= t_.back()) return s_.back()(x);
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - t_.begin()) - 1;
    const double w = (t - t_[j]) / (t_[j + 1] - t_[j]);
    return (1.0 - w) * s_[j](x) + w * s_[j + 1](x);
}

}  // namespace timinghedge
