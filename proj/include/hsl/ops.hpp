#pragma once

#include "hsl/grid.hpp"

#include <memory>

namespace hsl {

/// 5-point Laplacian with periodic wraparound.
ScalarField laplacian(const ScalarField& f);

/// Centred differences (f[i+1] - f[i-1]) / 2h on both axes.
VectorField gradient(const ScalarField& f);

/// Centred-difference divergence, the adjoint (up to sign) of `gradient`.
ScalarField divergence(const VectorField& v);

/// Normal velocities on cell faces: `east(i,j)` lives on the face between
/// cells (i,j) and (i+1,j), `north(i,j)` between (i,j) and (i,j+1).
struct FaceVelocity {
    ScalarField east;
    ScalarField north;

    explicit FaceVelocity(const Grid2D& grid) : east(grid), north(grid) {}

    /// Face values as the average of the two adjacent cell velocities.
    static FaceVelocity from_cells(const VectorField& u);

    double max_abs() const noexcept;
};

/// First-order upwind flux divergence of f carried by face velocities.
/// The update f <- f - dt * result conserves sum(f) to roundoff.
ScalarField upwind_flux_divergence(const ScalarField& f, const FaceVelocity& w);

/// div(u f) with face-averaged u and upwind f.
ScalarField advect_conservative(const ScalarField& f, const VectorField& u);

/// Periodic convolution with a Gaussian of standard deviation `eps`,
/// truncated at radius 3*eps and renormalised to unit mass. eps == 0 is the
/// identity.
ScalarField mollify(const ScalarField& f, double eps);

/// Solves -L psi = g on the periodic grid for mean-zero g.
///
/// Two discrete operators are supported. `Compact` is the 5-point Laplacian.
/// `Wide` is divergence(gradient(.)), the operator a collocated projection
/// must invert for the projected field to be discretely solenoidal; it has a
/// four-dimensional kernel (constants and the three checkerboard modes), and
/// right-hand sides are solved in the least-squares sense on that kernel.
class PoissonSolver {
public:
    enum class Method { Spectral, ConjugateGradient };
    enum class Stencil { Compact, Wide };

    explicit PoissonSolver(const Grid2D& grid, Method method = Method::Spectral,
                           Stencil stencil = Stencil::Compact, double tolerance = 1e-10);
    ~PoissonSolver();
    PoissonSolver(PoissonSolver&&) noexcept;
    PoissonSolver& operator=(PoissonSolver&&) noexcept;
    PoissonSolver(const PoissonSolver&) = delete;
    PoissonSolver& operator=(const PoissonSolver&) = delete;

    const Grid2D& grid() const noexcept;
    Method method() const noexcept;
    Stencil stencil() const noexcept;
    double tolerance() const noexcept;
    int max_iterations() const noexcept;

    /// Throws NonZeroMean if |integrate(g)| > 1e-10 * ||g||_2 * L, and
    /// NoConvergence if the iterative method hits its iteration cap.
    ScalarField solve(const ScalarField& g);

    /// Removes the mean of g and solves without the compatibility check.
    /// For right-hand sides that integrate to zero up to roundoff only.
    ScalarField solve_centred(const ScalarField& g);

    /// Applies -L to psi.
    ScalarField apply(const ScalarField& psi) const;

    /// Iterations used by the last conjugate-gradient solve (0 for spectral).
    int last_iterations() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Discrete homogeneous H^{-1} norm: sqrt(integrate(psi * f~)) where f~ is f
/// with its mean removed and -Lap_h psi = f~.
double hminus1_norm(const ScalarField& f, PoissonSolver& solver);
double hminus1_norm(const ScalarField& f);

/// Copy of f with its mean subtracted.
ScalarField remove_mean(const ScalarField& f);

} // namespace hsl
