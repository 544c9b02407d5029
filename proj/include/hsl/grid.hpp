#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hsl {

/// Uniform periodic N x N lattice on [0, L)^2. The spacing is derived from
/// (N, L) and never set on its own.
class Grid2D {
public:
    static constexpr int kMinCells = 8;

    Grid2D(int n_cells, double length);

    int n() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    double h() const noexcept { return h_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }

    /// Cell-centre coordinates.
    double x(int i) const noexcept { return (i + 0.5) * h_; }
    double y(int j) const noexcept { return (j + 0.5) * h_; }

    /// Linear index of (i, j) with periodic wraparound on both axes.
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(wrap(j)) * n_ + wrap(i);
    }
    int wrap(int k) const noexcept {
        int r = k % n_;
        return r < 0 ? r + n_ : r;
    }

    bool operator==(const Grid2D& other) const noexcept {
        return n_ == other.n_ && length_ == other.length_;
    }

private:
    int n_;
    double length_;
    double h_;
};

/// Cell-centred scalar values; storage is row-major with i (x) fastest.
class ScalarField {
public:
    explicit ScalarField(const Grid2D& grid, double value = 0.0);
    ScalarField(const Grid2D& grid, std::vector<double> values);

    const Grid2D& grid() const noexcept { return grid_; }

    double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
    /// Unwrapped access; (i, j) must already lie in [0, N).
    double& at(int i, int j) noexcept { return values_[static_cast<std::size_t>(j) * grid_.n() + i]; }
    double at(int i, int j) const noexcept { return values_[static_cast<std::size_t>(j) * grid_.n() + i]; }
    double& operator[](std::size_t k) noexcept { return values_[k]; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool all_finite() const noexcept;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s) noexcept;

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    Grid2D grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Collocated two-component vector field.
struct VectorField {
    ScalarField x;
    ScalarField y;

    explicit VectorField(const Grid2D& grid) : x(grid), y(grid) {}
    VectorField(ScalarField xs, ScalarField ys);

    const Grid2D& grid() const noexcept { return x.grid(); }
    bool all_finite() const noexcept { return x.all_finite() && y.all_finite(); }

    friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// Pointwise |v|.
ScalarField magnitude(const VectorField& v);

/// h^2 * sum of all cell values.
double integrate(const ScalarField& f);

/// Discrete L^p norm; pass std::numeric_limits<double>::infinity() for max|f|.
double lp_norm(const ScalarField& f, double p);

double max_value(const ScalarField& f);
double min_value(const ScalarField& f);

/// (sum_k dt * ||f_k||_2^2)^{1/2}, left-endpoint rule. Times are carried for
/// bookkeeping only; the step is uniform.
double spacetime_l2(std::span<const std::pair<double, ScalarField>> series, double dt);

/// Squared minimal-image distance from the centre of cell (i, j) to the box
/// centre (L/2, L/2).
double squared_radius_from_center(const Grid2D& grid, int i, int j) noexcept;

/// Mass of f held in the outermost ring of cells (`width` cells thick).
/// Used as a trust metric for the periodic truncation of the plane.
double boundary_mass(const ScalarField& f, int width = 1);

} // namespace hsl
