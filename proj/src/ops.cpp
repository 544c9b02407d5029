#include "hsl/ops.hpp"

#include "hsl/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

namespace hsl {

namespace {

// The FFTW planner is not re-entrant; plan creation and destruction are
// serialised, execution with per-solver buffers is not.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

double dot(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

} // namespace

ScalarField laplacian(const ScalarField& f) {
    const Grid2D& g = f.grid();
    const int n = g.n();
    const double inv_h2 = 1.0 / (g.h() * g.h());
    ScalarField out(g);
    for (int j = 0; j < n; ++j) {
        const int jp = j + 1 == n ? 0 : j + 1;
        const int jm = j == 0 ? n - 1 : j - 1;
        for (int i = 0; i < n; ++i) {
            const int ip = i + 1 == n ? 0 : i + 1;
            const int im = i == 0 ? n - 1 : i - 1;
            out.at(i, j) = (f.at(ip, j) + f.at(im, j) + f.at(i, jp) + f.at(i, jm) - 4.0 * f.at(i, j)) * inv_h2;
        }
    }
    return out;
}

VectorField gradient(const ScalarField& f) {
    const Grid2D& g = f.grid();
    const int n = g.n();
    const double inv_2h = 0.5 / g.h();
    VectorField out(g);
    for (int j = 0; j < n; ++j) {
        const int jp = j + 1 == n ? 0 : j + 1;
        const int jm = j == 0 ? n - 1 : j - 1;
        for (int i = 0; i < n; ++i) {
            const int ip = i + 1 == n ? 0 : i + 1;
            const int im = i == 0 ? n - 1 : i - 1;
            out.x.at(i, j) = (f.at(ip, j) - f.at(im, j)) * inv_2h;
            out.y.at(i, j) = (f.at(i, jp) - f.at(i, jm)) * inv_2h;
        }
    }
    return out;
}

ScalarField divergence(const VectorField& v) {
    const Grid2D& g = v.grid();
    const int n = g.n();
    const double inv_2h = 0.5 / g.h();
    ScalarField out(g);
    for (int j = 0; j < n; ++j) {
        const int jp = j + 1 == n ? 0 : j + 1;
        const int jm = j == 0 ? n - 1 : j - 1;
        for (int i = 0; i < n; ++i) {
            const int ip = i + 1 == n ? 0 : i + 1;
            const int im = i == 0 ? n - 1 : i - 1;
            out.at(i, j) = (v.x.at(ip, j) - v.x.at(im, j) + v.y.at(i, jp) - v.y.at(i, jm)) * inv_2h;
        }
    }
    return out;
}

FaceVelocity FaceVelocity::from_cells(const VectorField& u) {
    const Grid2D& g = u.grid();
    const int n = g.n();
    FaceVelocity w(g);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            w.east(i, j) = 0.5 * (u.x(i, j) + u.x(i + 1, j));
            w.north(i, j) = 0.5 * (u.y(i, j) + u.y(i, j + 1));
        }
    }
    return w;
}

double FaceVelocity::max_abs() const noexcept {
    return std::max(lp_norm(east, INFINITY), lp_norm(north, INFINITY));
}

ScalarField upwind_flux_divergence(const ScalarField& f, const FaceVelocity& w) {
    const Grid2D& g = f.grid();
    const int n = g.n();
    const double inv_h = 1.0 / g.h();

    // Fluxes through the east and north face of every cell.
    ScalarField fe(g), fn(g);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double we = w.east(i, j);
            fe(i, j) = we * (we >= 0.0 ? f(i, j) : f(i + 1, j));
            const double wn = w.north(i, j);
            fn(i, j) = wn * (wn >= 0.0 ? f(i, j) : f(i, j + 1));
        }
    }
    ScalarField out(g);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out(i, j) = (fe(i, j) - fe(i - 1, j) + fn(i, j) - fn(i, j - 1)) * inv_h;
        }
    }
    return out;
}

ScalarField advect_conservative(const ScalarField& f, const VectorField& u) {
    return upwind_flux_divergence(f, FaceVelocity::from_cells(u));
}

ScalarField mollify(const ScalarField& f, double eps) {
    if (!(eps >= 0.0)) throw InvalidArgument("mollify: eps must be nonnegative");
    if (eps == 0.0) return f;

    const Grid2D& g = f.grid();
    const int n = g.n();
    const double h = g.h();
    const double radius = 3.0 * eps;
    const int reach = static_cast<int>(std::floor(radius / h));
    if (reach == 0) return f;

    struct Tap {
        int di, dj;
        double w;
    };
    std::vector<Tap> taps;
    double total = 0.0;
    for (int dj = -reach; dj <= reach; ++dj) {
        for (int di = -reach; di <= reach; ++di) {
            const double r2 = (di * di + dj * dj) * h * h;
            if (r2 > radius * radius) continue;
            const double w = std::exp(-r2 / (2.0 * eps * eps));
            taps.push_back({di, dj, w});
            total += w;
        }
    }
    for (Tap& t : taps) t.w /= total;

    ScalarField out(g);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (const Tap& t : taps) s += t.w * f(i - t.di, j - t.dj);
            out(i, j) = s;
        }
    }
    return out;
}

ScalarField remove_mean(const ScalarField& f) {
    ScalarField out = f;
    double mean = 0.0;
    for (double v : f.values()) mean += v;
    mean /= static_cast<double>(f.size());
    for (double& v : out.values()) v -= mean;
    return out;
}

// ---------------------------------------------------------------------------

struct PoissonSolver::Impl {
    Grid2D grid;
    Method method;
    Stencil stencil;
    double tolerance;
    int max_iterations;
    int last_iterations = 0;

    // Spectral path.
    double* real_buf = nullptr;
    fftw_complex* spec_buf = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<double> inv_symbol;  // 1/sigma(k), 0 on the kernel

    Impl(const Grid2D& g, Method m, Stencil s, double tol)
        : grid(g), method(m), stencil(s), tolerance(tol),
          max_iterations(std::max(1000, 4 * g.n() * g.n())) {
        if (method == Method::Spectral) setup_spectral();
    }

    ~Impl() {
        std::lock_guard lock(fftw_planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        if (real_buf) fftw_free(real_buf);
        if (spec_buf) fftw_free(spec_buf);
    }

    bool in_kernel(int kx, int ky) const {
        const int n = grid.n();
        if (stencil == Stencil::Compact) return kx == 0 && ky == 0;
        const bool x0 = kx == 0 || 2 * kx == n;
        const bool y0 = ky == 0 || 2 * ky == n;
        return x0 && y0;
    }

    double symbol(int kx, int ky) const {
        const int n = grid.n();
        const double h2 = grid.h() * grid.h();
        const double pi = std::numbers::pi;
        if (stencil == Stencil::Compact) {
            const double sx = std::sin(pi * kx / n);
            const double sy = std::sin(pi * ky / n);
            return 4.0 * (sx * sx + sy * sy) / h2;
        }
        const double sx = std::sin(2.0 * pi * kx / n);
        const double sy = std::sin(2.0 * pi * ky / n);
        return (sx * sx + sy * sy) / h2;
    }

    void setup_spectral() {
        const int n = grid.n();
        const int nc = n / 2 + 1;
        {
            std::lock_guard lock(fftw_planner_mutex());
            real_buf = fftw_alloc_real(static_cast<std::size_t>(n) * n);
            spec_buf = fftw_alloc_complex(static_cast<std::size_t>(n) * nc);
            forward = fftw_plan_dft_r2c_2d(n, n, real_buf, spec_buf, FFTW_ESTIMATE);
            backward = fftw_plan_dft_c2r_2d(n, n, spec_buf, real_buf, FFTW_ESTIMATE);
        }
        inv_symbol.assign(static_cast<std::size_t>(n) * nc, 0.0);
        const double norm = 1.0 / (static_cast<double>(n) * n);
        for (int ky = 0; ky < n; ++ky) {
            for (int kx = 0; kx < nc; ++kx) {
                if (in_kernel(kx, ky)) continue;
                inv_symbol[static_cast<std::size_t>(ky) * nc + kx] = norm / symbol(kx, ky);
            }
        }
    }

    ScalarField solve_spectral(const ScalarField& g) {
        const std::size_t total = grid.size();
        std::copy(g.values().begin(), g.values().end(), real_buf);
        fftw_execute(forward);
        const std::size_t ncomplex = inv_symbol.size();
        for (std::size_t k = 0; k < ncomplex; ++k) {
            spec_buf[k][0] *= inv_symbol[k];
            spec_buf[k][1] *= inv_symbol[k];
        }
        fftw_execute(backward);
        ScalarField psi(grid, std::vector<double>(real_buf, real_buf + total));
        last_iterations = 0;
        return remove_mean(psi);
    }

    // Orthogonal projection of g onto the range of the operator.
    ScalarField project_range(const ScalarField& g) const {
        const int n = grid.n();
        if (stencil == Stencil::Compact || n % 2 != 0) return remove_mean(g);
        double sums[2][2] = {{0, 0}, {0, 0}};
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) sums[j % 2][i % 2] += g(i, j);
        const double count = static_cast<double>(n) * n / 4.0;
        ScalarField out = g;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) out(i, j) -= sums[j % 2][i % 2] / count;
        return out;
    }

    ScalarField apply(const ScalarField& psi) const {
        if (stencil == Stencil::Compact) return -1.0 * laplacian(psi);
        return -1.0 * divergence(gradient(psi));
    }

    ScalarField solve_cg(const ScalarField& g) {
        const ScalarField b = project_range(g);
        ScalarField x(grid);
        ScalarField r = b;
        ScalarField p = r;
        const double bnorm = std::sqrt(dot(b, b));
        double rr = dot(r, r);
        last_iterations = 0;
        if (bnorm == 0.0) return x;
        while (std::sqrt(rr) > tolerance * bnorm) {
            if (last_iterations >= max_iterations) {
                throw NoConvergence("PoissonSolver: conjugate gradient did not reach tolerance in " +
                                    std::to_string(max_iterations) + " iterations");
            }
            const ScalarField ap = apply(p);
            const double alpha = rr / dot(p, ap);
            for (std::size_t k = 0; k < x.size(); ++k) {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            const double rr_new = dot(r, r);
            const double beta = rr_new / rr;
            rr = rr_new;
            for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + beta * p[k];
            ++last_iterations;
        }
        return remove_mean(x);
    }
};

PoissonSolver::PoissonSolver(const Grid2D& grid, Method method, Stencil stencil, double tolerance)
    : impl_(std::make_unique<Impl>(grid, method, stencil, tolerance)) {
    if (!(tolerance > 0.0)) throw InvalidArgument("PoissonSolver: tolerance must be positive");
}

PoissonSolver::~PoissonSolver() = default;
PoissonSolver::PoissonSolver(PoissonSolver&&) noexcept = default;
PoissonSolver& PoissonSolver::operator=(PoissonSolver&&) noexcept = default;

const Grid2D& PoissonSolver::grid() const noexcept { return impl_->grid; }
PoissonSolver::Method PoissonSolver::method() const noexcept { return impl_->method; }
PoissonSolver::Stencil PoissonSolver::stencil() const noexcept { return impl_->stencil; }
double PoissonSolver::tolerance() const noexcept { return impl_->tolerance; }
int PoissonSolver::max_iterations() const noexcept { return impl_->max_iterations; }
int PoissonSolver::last_iterations() const noexcept { return impl_->last_iterations; }

ScalarField PoissonSolver::apply(const ScalarField& psi) const { return impl_->apply(psi); }

ScalarField PoissonSolver::solve(const ScalarField& g) {
    if (!(g.grid() == impl_->grid)) throw InvalidArgument("PoissonSolver: grid mismatch");
    const double mean_integral = integrate(g);
    const double bound = 1e-10 * lp_norm(g, 2.0) * impl_->grid.length();
    if (std::abs(mean_integral) > bound) {
        throw NonZeroMean("PoissonSolver: right-hand side integrates to " +
                          std::to_string(mean_integral) + ", not compatible with periodic problem");
    }
    if (impl_->method == Method::Spectral) return impl_->solve_spectral(g);
    return impl_->solve_cg(g);
}

ScalarField PoissonSolver::solve_centred(const ScalarField& g) {
    if (!(g.grid() == impl_->grid)) throw InvalidArgument("PoissonSolver: grid mismatch");
    const ScalarField centred = remove_mean(g);
    if (impl_->method == Method::Spectral) return impl_->solve_spectral(centred);
    return impl_->solve_cg(centred);
}

double hminus1_norm(const ScalarField& f, PoissonSolver& solver) {
    const ScalarField centred = remove_mean(f);
    const ScalarField psi = solver.solve_centred(centred);
    double s = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) s += psi[k] * centred[k];
    const double h = f.grid().h();
    return std::sqrt(std::max(0.0, h * h * s));
}

double hminus1_norm(const ScalarField& f) {
    PoissonSolver solver(f.grid());
    return hminus1_norm(f, solver);
}

} // namespace hsl
