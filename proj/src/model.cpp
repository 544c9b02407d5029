#include "hsl/model.hpp"

#include "hsl/errors.hpp"
#include "hsl/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hsl {

double Coefficients::chi(double c) const noexcept {
    switch (chi_kind) {
    case ChiKind::Constant:
        return chi_0;
    case ChiKind::Saturating:
        return chi_0 / ((1.0 + c) * (1.0 + c));
    }
    return 0.0;
}

double Coefficients::f(double c) const noexcept {
    switch (f_kind) {
    case ConsumptionKind::Saturating:
        return c / (1.0 + c);
    case ConsumptionKind::LinearCapped:
        return std::min(c, c_bound);
    }
    return 0.0;
}

double Coefficients::phi(double /*x*/, double y, double box_length) const noexcept {
    if (phi_kind == PotentialKind::Zero) return 0.0;
    return phi_amp * std::sin(2.0 * std::numbers::pi * y / box_length);
}

void Coefficients::grad_phi(double /*x*/, double y, double box_length, double& gx,
                            double& gy) const noexcept {
    gx = 0.0;
    gy = 0.0;
    if (phi_kind == PotentialKind::Zero) return;
    const double k = 2.0 * std::numbers::pi / box_length;
    gy = phi_amp * k * std::cos(k * y);
}

double Coefficients::chi_sup() const noexcept { return std::abs(chi_0); }

double Coefficients::chi_lipschitz() const noexcept {
    // d/dc chi0/(1+c)^2 = -2 chi0/(1+c)^3, largest at c = 0.
    return chi_kind == ChiKind::Constant ? 0.0 : 2.0 * std::abs(chi_0);
}

double Coefficients::f_lipschitz() const noexcept {
    // c/(1+c) has slope 1/(1+c)^2 <= 1; min(c, c_B) has slope 1 below c_B.
    return 1.0;
}

double Coefficients::grad_phi_sup(double box_length) const noexcept {
    if (phi_kind == PotentialKind::Zero) return 0.0;
    return std::abs(phi_amp) * 2.0 * std::numbers::pi / box_length;
}

std::string to_string(ChiKind k) { return k == ChiKind::Constant ? "constant" : "saturating"; }
std::string to_string(ConsumptionKind k) {
    return k == ConsumptionKind::Saturating ? "saturating" : "linear-capped";
}
std::string to_string(PotentialKind k) { return k == PotentialKind::Zero ? "zero" : "gravity"; }

void SimParams::check() const {
    if (!(m >= 3.0)) throw InvalidArgument("SimParams: m must be >= 3");
    check_numerics();
}

void SimParams::check_numerics() const {
    if (!(m > 1.0)) throw InvalidArgument("SimParams: m must be > 1");
    if (!(eps_visc >= 0.0)) throw InvalidArgument("SimParams: eps_visc must be >= 0");
    if (!(eps_mollify >= 0.0)) throw InvalidArgument("SimParams: eps_mollify must be >= 0");
    if (!(dt_safety > 0.0 && dt_safety <= 1.0)) {
        throw InvalidArgument("SimParams: dt_safety must lie in (0, 1]");
    }
    if (!(t_end >= 0.0)) throw InvalidArgument("SimParams: t_end must be >= 0");
    if (snapshot_every < 1) throw InvalidArgument("SimParams: snapshot_every must be >= 1");
    if (!(coeffs.c_bound > 0.0)) throw InvalidArgument("SimParams: c_B must be > 0");
    if (!(C0 > 0.0)) throw InvalidArgument("SimParams: C0 must be > 0");
    if (!(compl_threshold_rel >= 0.0)) {
        throw InvalidArgument("SimParams: compl_threshold_rel must be >= 0");
    }
}

// ---------------------------------------------------------------------------

VectorField taylor_green(const Grid2D& grid, double amplitude) {
    const double k = 2.0 * std::numbers::pi / grid.length();
    VectorField u(grid);
    for (int j = 0; j < grid.n(); ++j) {
        for (int i = 0; i < grid.n(); ++i) {
            const double x = grid.x(i), y = grid.y(j);
            u.x(i, j) = amplitude * std::sin(k * x) * std::cos(k * y);
            u.y(i, j) = -amplitude * std::cos(k * x) * std::sin(k * y);
        }
    }
    return u;
}

namespace {

ScalarField disc(const Grid2D& grid, double cx, double cy, double radius, double amp) {
    ScalarField out(grid);
    for (int j = 0; j < grid.n(); ++j) {
        for (int i = 0; i < grid.n(); ++i) {
            const double dx = grid.x(i) - cx, dy = grid.y(j) - cy;
            if (dx * dx + dy * dy <= radius * radius) out(i, j) = amp;
        }
    }
    return out;
}

VectorField project(const VectorField& u) {
    PoissonSolver solver(u.grid(), PoissonSolver::Method::Spectral, PoissonSolver::Stencil::Wide);
    // div(u - grad q) = 0  <=>  -div grad q = -div u.
    ScalarField rhs = -1.0 * divergence(u);
    const ScalarField q = solver.solve_centred(rhs);
    const VectorField gq = gradient(q);
    return VectorField(u.x - gq.x, u.y - gq.y);
}

} // namespace

InitialData make_initial_patch(const SimParams& params, const PatchSpec& spec) {
    const Grid2D& grid = params.grid;
    const double length = grid.length();
    if (!(spec.radius > 0.0) || !(spec.mollify_width >= 0.0)) {
        throw InvalidArgument("make_initial_patch: radius must be > 0 and mollify_width >= 0");
    }
    if (spec.n_amp < 0.0 || spec.n_amp > 1.0) {
        throw InvalidArgument("make_initial_patch: n_amp must lie in [0, 1]");
    }
    double reach = spec.radius;
    if (spec.c_profile == OxygenProfile::Disc) reach = std::max(reach, spec.c_radius);
    reach += 3.0 * spec.mollify_width;
    const double margin = length / 8.0;
    const bool fits = spec.center_x - reach >= margin && spec.center_x + reach <= length - margin &&
                      spec.center_y - reach >= margin && spec.center_y + reach <= length - margin;
    if (!fits) {
        std::ostringstream msg;
        msg << "make_initial_patch: patch of reach " << reach << " around (" << spec.center_x << ", "
            << spec.center_y << ") leaves less than L/8 = " << margin << " to the box edge";
        throw PatchTooLarge(msg.str());
    }

    InitialData data(grid);
    data.n0 = mollify(disc(grid, spec.center_x, spec.center_y, spec.radius, spec.n_amp),
                      spec.mollify_width);
    if (spec.c_profile == OxygenProfile::Constant) {
        data.c0 = ScalarField(grid, spec.c_amp);
    } else {
        data.c0 = mollify(disc(grid, spec.center_x, spec.center_y, spec.c_radius, spec.c_amp),
                          spec.mollify_width);
    }
    if (spec.u_profile == VelocityProfile::TaylorGreen && spec.u_amp != 0.0) {
        data.u0 = project(taylor_green(grid, spec.u_amp));
    }

    const ValidationReport report = validate_assumptions(data, params);
    if (!report.passed()) {
        std::string msg = "make_initial_patch: initial data violates";
        for (const std::string& name : report.failures()) msg += " [" + name + "]";
        throw ValidationFailed(msg);
    }
    return data;
}

bool ValidationReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::failures() const {
    std::vector<std::string> out;
    for (const AssumptionCheck& c : checks)
        if (!c.passed) out.push_back(c.name);
    return out;
}

ValidationReport validate_assumptions(const InitialData& data, const SimParams& params) {
    ValidationReport report;
    const double m = params.m;
    const double C0 = params.C0;
    const double c_b = params.coeffs.c_bound;
    const Grid2D& grid = data.n0.grid();

    auto upper = [&](std::string name, double value, double bound) {
        const bool ok = std::isfinite(value) && value <= bound;
        report.checks.push_back({std::move(name), value, bound, ok});
    };
    auto lower = [&](std::string name, double value, double bound) {
        const bool ok = std::isfinite(value) && value >= bound;
        report.checks.push_back({std::move(name), value, bound, ok});
    };

    lower("n0 >= 0", min_value(data.n0), 0.0);
    lower("c0 >= 0", min_value(data.c0), 0.0);
    upper("c0 <= c_B", max_value(data.c0), c_b);
    upper("div u0 = 0", lp_norm(divergence(data.u0), INFINITY), 1e-10);

    upper("||n0||_L1 <= C0", lp_norm(data.n0, 1.0), C0);
    upper("||c0||_L1 <= C0", lp_norm(data.c0, 1.0), C0);
    upper("||n0||_L^(m-1) <= C0", lp_norm(data.n0, m - 1.0), C0);
    {
        const VectorField gc = gradient(data.c0);
        const double c2 = lp_norm(data.c0, 2.0);
        const double g2 = lp_norm(magnitude(gc), 2.0);
        upper("||c0||_H1 <= C0", std::sqrt(c2 * c2 + g2 * g2), C0);
    }
    {
        const double ux = lp_norm(data.u0.x, 2.0), uy = lp_norm(data.u0.y, 2.0);
        upper("||u0||_L2 <= C0", std::sqrt(ux * ux + uy * uy), C0);
    }

    {
        // Raised to m+1 directly so that n0 <= 1 data stays bounded by its mass.
        double s = 0.0;
        for (double v : data.n0.values()) s += std::pow(std::abs(v), m + 1.0);
        upper("||n0||_L^(m+1)^(m+1) <= C0", grid.h() * grid.h() * s, C0);
    }
    upper("||n0||_H^-1 <= C0", hminus1_norm(data.n0), C0);

    {
        double mom_n = 0.0, mom_c = 0.0;
        for (int j = 0; j < grid.n(); ++j) {
            for (int i = 0; i < grid.n(); ++i) {
                const double r2 = squared_radius_from_center(grid, i, j);
                mom_n += std::abs(data.n0(i, j)) * r2;
                mom_c += data.c0(i, j) * data.c0(i, j) * r2;
            }
        }
        const double h2 = grid.h() * grid.h();
        upper("|| |x|^2 n0 ||_L1 <= C0", h2 * mom_n, C0);
        upper("|| |x| c0 ||_L2 <= C0", std::sqrt(h2 * mom_c), C0);
    }
    return report;
}

CoefficientFields eval_coefficients(const Coefficients& coeffs, const ScalarField& c) {
    CoefficientFields out{ScalarField(c.grid()), ScalarField(c.grid()), 0};
    for (std::size_t k = 0; k < c.size(); ++k) {
        double v = c[k];
        if (v < 0.0 || v > coeffs.c_bound) {
            ++out.clamped_cells;
            v = std::clamp(v, 0.0, coeffs.c_bound);
        }
        out.chi[k] = coeffs.chi(v);
        out.f[k] = coeffs.f(v);
    }
    return out;
}

} // namespace hsl
