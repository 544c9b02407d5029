#include "hsl/checks.hpp"

#include "hsl/io.hpp"
#include "hsl/limit_lab.hpp"
#include "hsl/ops.hpp"
#include "hsl/solver.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace hsl {

namespace {

ScalarField random_field(const Grid2D& g, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    ScalarField f(g);
    for (double& v : f.values()) v = dist(rng);
    return f;
}

std::string sci(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

CheckResult bounded(std::string name, double value, double bound) {
    return {std::move(name), std::isfinite(value) && value <= bound, sci(value) + " <= " + sci(bound)};
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) { return lp_norm(a - b, INFINITY); }

} // namespace

std::vector<CheckResult> run_selftest() {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(20240917);
    const Grid2D g(16, 2.0 * std::numbers::pi);
    const double h = g.h();

    {
        // cos(2x + 3y) is an eigenfunction of the 5-point Laplacian.
        ScalarField f(g), expect(g);
        const double lambda = 4.0 / (h * h) * (std::pow(std::sin(h), 2) + std::pow(std::sin(1.5 * h), 2));
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i) {
                f.at(i, j) = std::cos(2.0 * g.x(i) + 3.0 * g.y(j));
                expect.at(i, j) = -lambda * f.at(i, j);
            }
        out.push_back(bounded("laplacian eigenmode", max_abs_diff(laplacian(f), expect), 1e-12));
    }
    {
        const ScalarField f = random_field(g, rng, -1.0, 1.0);
        PoissonSolver wide(g, PoissonSolver::Method::Spectral, PoissonSolver::Stencil::Wide);
        const ScalarField dg = divergence(gradient(f));
        out.push_back(bounded("wide operator is div grad", max_abs_diff(wide.apply(f), -1.0 * dg), 1e-12));
    }
    {
        const ScalarField rhs = remove_mean(random_field(g, rng, -1.0, 1.0));
        PoissonSolver fft(g);
        PoissonSolver cg(g, PoissonSolver::Method::ConjugateGradient, PoissonSolver::Stencil::Compact, 1e-12);
        const ScalarField a = fft.solve(rhs);
        const ScalarField b = cg.solve(rhs);
        out.push_back(bounded("poisson residual", max_abs_diff(fft.apply(a), rhs), 1e-10));
        out.push_back(bounded("spectral and CG agree", max_abs_diff(a, b), 1e-8));
    }
    {
        const ScalarField f = random_field(g, rng, 0.0, 1.0);
        const VectorField u(random_field(g, rng, -1.0, 1.0), random_field(g, rng, -1.0, 1.0));
        const double total = std::abs(integrate(advect_conservative(f, u)));
        out.push_back(bounded("upwind advection conserves", total, 1e-12));
    }
    {
        const ScalarField f = random_field(g, rng, 0.0, 1.0);
        const double drift = std::abs(integrate(mollify(f, 0.5)) - integrate(f));
        out.push_back(bounded("mollifier conserves", drift, 1e-12));
    }
    {
        SimParams params;
        params.grid = Grid2D(32, 2.0 * std::numbers::pi);
        params.t_end = 0.01;
        PatchSpec spec;
        spec.u_profile = VelocityProfile::TaylorGreen;
        spec.u_amp = 0.5;
        const InitialData data = make_initial_patch(params, spec);
        Solver solver(params);
        const RunResult run = solver.run(data);
        const double drift = std::abs(integrate(run.final_state.n) / integrate(data.n0) - 1.0);
        out.push_back(bounded("coupled run conserves n", drift, 1e-12));
        out.push_back(bounded("coupled run projection", run.max_projection_residual, 1e-9));
        const bool in_range = min_value(run.final_state.c) >= 0.0 &&
                              max_value(run.final_state.c) <= params.coeffs.c_bound;
        out.push_back({"coupled run keeps c in [0, c_B]", in_range, ""});
    }
    {
        Config cfg;
        cfg.params.m = 7.25;
        cfg.m_list = {5.0, 6.5};
        cfg.params.coeffs.chi_kind = ChiKind::Saturating;
        const bool same = parse_config(serialize(cfg)) == cfg;
        out.push_back({"config round trip", same, ""});
    }
    {
        const Barenblatt b = Barenblatt::with_mass(2.0, 1.0);
        out.push_back(bounded("barenblatt mass formula", std::abs(b.mass() - 1.0), 1e-13));
    }
    {
        const OxygenOdeReport ode = oxygen_ode(16, 0.3, 0.7, 20, ConsumptionKind::Saturating);
        out.push_back(bounded("oxygen ode", ode.rel_error, 1e-4));
        const TaylorGreenReport tg = taylor_green_decay(16, 2.0 * std::numbers::pi, 0.02, 1.0);
        out.push_back(bounded("taylor-green decay", tg.rel_error, 1e-10));
    }
    return out;
}

TaylorGreenReport taylor_green_decay(int n, double length, double t_end, double amp) {
    SimParams params;
    params.grid = Grid2D(n, length);
    params.coeffs.chi_0 = 0.0;
    params.t_end = t_end;
    const Grid2D& g = params.grid;
    const double h = g.h();
    const double lambda = 8.0 / (h * h) * std::pow(std::sin(std::numbers::pi / n), 2);

    State state(g);
    state.u = taylor_green(g, amp);
    auto kinetic = [](const State& s) {
        const double ux = lp_norm(s.u.x, 2.0), uy = lp_norm(s.u.y, 2.0);
        return 0.5 * (ux * ux + uy * uy);
    };

    TaylorGreenReport report;
    report.ke_initial = kinetic(state);
    double factor = 1.0;
    Solver solver(params);
    while (state.t < t_end) {
        auto [next, step] = solver.step(state, t_end - state.t);
        factor *= (1.0 - step.dt_used * lambda) * (1.0 - step.dt_used * lambda);
        state = std::move(next);
        ++report.steps;
    }
    report.ke_final = kinetic(state);
    report.ke_expected = report.ke_initial * factor;
    report.rel_error = std::abs(report.ke_final - report.ke_expected) / report.ke_expected;
    return report;
}

OxygenOdeReport oxygen_ode(int n, double n_bar, double c_bar, int steps, ConsumptionKind kind) {
    SimParams params;
    params.grid = Grid2D(n, 2.0 * std::numbers::pi);
    params.coeffs.f_kind = kind;
    params.coeffs.chi_0 = 0.0;
    State state(params.grid);
    state.n = ScalarField(params.grid, n_bar);
    state.c = ScalarField(params.grid, c_bar);
    Solver solver(params);

    const Coefficients& co = params.coeffs;
    auto rhs = [&](double c) { return -n_bar * co.f(c); };
    double ref = c_bar;
    OxygenOdeReport report;
    for (int s = 0; s < steps; ++s) {
        auto [next, step] = solver.step(state);
        const double dt = step.dt_used / 100.0;
        for (int k = 0; k < 100; ++k) {
            const double k1 = rhs(ref);
            const double k2 = rhs(ref + 0.5 * dt * k1);
            const double k3 = rhs(ref + 0.5 * dt * k2);
            const double k4 = rhs(ref + dt * k3);
            ref += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        report.dt_total += step.dt_used;
        state = std::move(next);
        ++report.steps;
    }
    report.c_final = state.c[0];
    report.c_reference = ref;
    report.rel_error = std::abs(report.c_final - ref) / std::abs(ref);
    return report;
}

} // namespace hsl
