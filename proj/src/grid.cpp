#include "hsl/grid.hpp"

#include "hsl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hsl {

Grid2D::Grid2D(int n_cells, double length) : n_(n_cells), length_(length), h_(0.0) {
    if (n_cells < kMinCells) {
        throw InvalidArgument("Grid2D: need at least " + std::to_string(kMinCells) +
                              " cells per axis, got " + std::to_string(n_cells));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw InvalidArgument("Grid2D: box length must be positive and finite");
    }
    h_ = length_ / n_;
}

ScalarField::ScalarField(const Grid2D& grid, double value)
    : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(const Grid2D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InvalidArgument("ScalarField: value count does not match grid");
    }
}

bool ScalarField::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    if (!(grid_ == other.grid_)) throw InvalidArgument("ScalarField: grid mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    if (!(grid_ == other.grid_)) throw InvalidArgument("ScalarField: grid mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField::VectorField(ScalarField xs, ScalarField ys) : x(std::move(xs)), y(std::move(ys)) {
    if (!(x.grid() == y.grid())) throw InvalidArgument("VectorField: components on different grids");
}

ScalarField magnitude(const VectorField& v) {
    ScalarField out(v.grid());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::hypot(v.x[k], v.y[k]);
    return out;
}

double integrate(const ScalarField& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    const double h = f.grid().h();
    return h * h * sum;
}

double lp_norm(const ScalarField& f, double p) {
    if (std::isinf(p) && p > 0) {
        double m = 0.0;
        for (double v : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1 or infinity");
    const double h = f.grid().h();
    double sum = 0.0;
    if (p == 1.0) {
        for (double v : f.values()) sum += std::abs(v);
        return h * h * sum;
    }
    if (p == 2.0) {
        for (double v : f.values()) sum += v * v;
        return std::sqrt(h * h * sum);
    }
    for (double v : f.values()) sum += std::pow(std::abs(v), p);
    return std::pow(h * h * sum, 1.0 / p);
}

double max_value(const ScalarField& f) {
    return *std::max_element(f.values().begin(), f.values().end());
}

double min_value(const ScalarField& f) {
    return *std::min_element(f.values().begin(), f.values().end());
}

double spacetime_l2(std::span<const std::pair<double, ScalarField>> series, double dt) {
    if (series.empty()) throw InvalidArgument("spacetime_l2: empty series");
    if (!(dt >= 0.0)) throw InvalidArgument("spacetime_l2: dt must be nonnegative");
    double acc = 0.0;
    for (const auto& [t, f] : series) {
        const double nrm = lp_norm(f, 2.0);
        acc += dt * nrm * nrm;
    }
    return std::sqrt(acc);
}

double squared_radius_from_center(const Grid2D& grid, int i, int j) noexcept {
    const double length = grid.length();
    const double half = 0.5 * length;
    auto minimal = [&](double d) {
        if (d > half) d -= length;
        if (d < -half) d += length;
        return d;
    };
    const double dx = minimal(grid.x(i) - half);
    const double dy = minimal(grid.y(j) - half);
    return dx * dx + dy * dy;
}

double boundary_mass(const ScalarField& f, int width) {
    const Grid2D& g = f.grid();
    const int n = g.n();
    width = std::clamp(width, 0, n / 2);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const bool ring = i < width || j < width || i >= n - width || j >= n - width;
            if (ring) sum += f(i, j);
        }
    }
    return g.h() * g.h() * sum;
}

} // namespace hsl
