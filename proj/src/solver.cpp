#include "hsl/solver.hpp"

#include "hsl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hsl {

std::string to_string(CflTerm term) {
    switch (term) {
    case CflTerm::PmeDiffusion:
        return "pme_diffusion";
    case CflTerm::Advection:
        return "advection";
    case CflTerm::OxygenDiffusion:
        return "oxygen_diffusion";
    case CflTerm::Viscosity:
        return "viscosity";
    }
    return "unknown";
}

Solver::Solver(SimParams params, PoissonSolver::Method method)
    : params_(std::move(params)),
      projector_(params_.grid, method, PoissonSolver::Stencil::Wide, 1e-12) {
    params_.check_numerics();
}

FaceVelocity Solver::chemotactic_velocity(const State& state) const {
    const Grid2D& g = state.grid();
    const int n = g.n();
    const ScalarField cm = mollify(state.c, params_.eps_mollify);
    const CoefficientFields cf = eval_coefficients(params_.coeffs, state.c);
    const double inv_h = 1.0 / g.h();
    FaceVelocity w(g);
    for (int j = 0; j < n; ++j) {
        const int jp = j + 1 == n ? 0 : j + 1;
        for (int i = 0; i < n; ++i) {
            const int ip = i + 1 == n ? 0 : i + 1;
            w.east.at(i, j) = 0.5 * (cf.chi.at(i, j) + cf.chi.at(ip, j)) * (cm.at(ip, j) - cm.at(i, j)) * inv_h;
            w.north.at(i, j) = 0.5 * (cf.chi.at(i, j) + cf.chi.at(i, jp)) * (cm.at(i, jp) - cm.at(i, j)) * inv_h;
        }
    }
    return w;
}

CflBound Solver::cfl(const State& state) const {
    const double h = state.grid().h();
    const double h2 = h * h;
    const double m = params_.m;
    const double n_max = std::max(0.0, max_value(state.n));
    const double diffusivity = m * std::pow(n_max, m - 1.0) + params_.eps_visc;
    const double u_max = std::max(lp_norm(state.u.x, INFINITY), lp_norm(state.u.y, INFINITY));
    const double chem_max = chemotactic_velocity(state).max_abs();
    constexpr double tiny = 1e-300;

    CflBound best{h2 / 4.0, CflTerm::OxygenDiffusion};
    auto consider = [&](double dt, CflTerm term) {
        if (dt < best.dt) best = {dt, term};
    };
    if (diffusivity > 0.0) consider(h2 / (4.0 * diffusivity), CflTerm::PmeDiffusion);
    consider(h2 / 4.0, CflTerm::Viscosity);
    consider(h / (2.0 * u_max + 2.0 * chem_max + tiny), CflTerm::Advection);
    best.dt *= params_.dt_safety;
    return best;
}

void Solver::check_dt(const State& state, double dt) const {
    if (!(dt > 0.0)) throw CflViolation("time step must be positive");
    const double bound = cfl_dt(state);
    if (dt > bound * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "time step " << dt << " exceeds CFL bound " << bound;
        throw CflViolation(msg.str());
    }
}

ScalarField Solver::step_density(const State& state, double dt, StepReport* report) const {
    check_dt(state, dt);
    return density_update(state, dt, report);
}

ScalarField Solver::density_update(const State& state, double dt, StepReport* report) const {
    const Grid2D& g = state.grid();
    const double m = params_.m;

    ScalarField nm(g);
    for (std::size_t k = 0; k < nm.size(); ++k) nm[k] = state.n[k] > 0.0 ? std::pow(state.n[k], m) : 0.0;
    const ScalarField diffusion = laplacian(nm);
    const ScalarField transport = advect_conservative(state.n, state.u);
    const ScalarField aggregation = upwind_flux_divergence(state.n, chemotactic_velocity(state));

    ScalarField out = state.n;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] += dt * (diffusion[k] - transport[k] - aggregation[k]);
    }
    if (params_.eps_visc > 0.0) {
        const ScalarField visc = laplacian(state.n);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += dt * params_.eps_visc * visc[k];
    }

    double n_min = 0.0, clipped = 0.0;
    for (double& v : out.values()) {
        n_min = std::min(n_min, v);
        if (v < 0.0) {
            clipped -= v;
            v = 0.0;
        }
    }
    if (report) {
        report->n_min_before_clip = n_min;
        report->clipped_mass = g.h() * g.h() * clipped;
    }
    return out;
}

ScalarField Solver::step_oxygen(const State& state, double dt, StepReport* report) const {
    check_dt(state, dt);
    return oxygen_update(state, dt, report);
}

ScalarField Solver::oxygen_update(const State& state, double dt, StepReport* report) const {
    const ScalarField diffusion = laplacian(state.c);
    const ScalarField transport = advect_conservative(state.c, state.u);
    const CoefficientFields cf = eval_coefficients(params_.coeffs, state.c);
    const double c_b = params_.coeffs.c_bound;

    ScalarField out = state.c;
    double clamp = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        double v = out[k] + dt * (diffusion[k] - transport[k] - state.n[k] * cf.f[k]);
        const double clamped = std::clamp(v, 0.0, c_b);
        clamp = std::max(clamp, std::abs(v - clamped));
        out[k] = clamped;
    }
    if (report) report->c_clamp = clamp;
    return out;
}

std::pair<VectorField, ScalarField> Solver::step_velocity_project(const State& state, double dt,
                                                                  StepReport* report) {
    check_dt(state, dt);
    return velocity_update(state, dt, report);
}

std::pair<VectorField, ScalarField> Solver::velocity_update(const State& state, double dt,
                                                            StepReport* report) {
    const Grid2D& g = state.grid();
    const VectorField& u = state.u;
    const ScalarField lap_x = laplacian(u.x), lap_y = laplacian(u.y);
    const VectorField gx = gradient(u.x), gy = gradient(u.y);

    VectorField star = u;
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            double fx = 0.0, fy = 0.0;
            params_.coeffs.grad_phi(g.x(i), g.y(j), g.length(), fx, fy);
            const double a = u.x.at(i, j), b = u.y.at(i, j), n = state.n.at(i, j);
            star.x.at(i, j) += dt * (lap_x.at(i, j) - (a * gx.x.at(i, j) + b * gx.y.at(i, j)) - n * fx);
            star.y.at(i, j) += dt * (lap_y.at(i, j) - (a * gy.x.at(i, j) + b * gy.y.at(i, j)) - n * fy);
        }
    }

    // div(u* - dt grad q) = 0  <=>  -div grad q = -div(u*) / dt.
    ScalarField rhs = divergence(star);
    rhs *= -1.0 / dt;
    ScalarField q = projector_.solve_centred(rhs);
    const VectorField gq = gradient(q);
    for (std::size_t k = 0; k < q.size(); ++k) {
        star.x[k] -= dt * gq.x[k];
        star.y[k] -= dt * gq.y[k];
    }
    if (report) report->projection_residual = lp_norm(divergence(star), INFINITY);
    return {std::move(star), std::move(q)};
}

std::pair<State, StepReport> Solver::step(const State& state, double dt_cap) {
    const CflBound bound = cfl(state);
    StepReport report;
    report.dt_used = std::min(bound.dt, dt_cap);
    report.cfl_binding_term = bound.binding;
    const double dt = report.dt_used;
    if (!(dt > 0.0)) throw CflViolation("step: time step must be positive");

    State next(state.grid());
    next.n = density_update(state, dt, &report);
    next.c = oxygen_update(state, dt, &report);
    auto [u_new, pi] = velocity_update(state, dt, &report);
    next.u = std::move(u_new);
    next.pi = std::move(pi);
    next.t = state.t + dt;
    return {std::move(next), report};
}

RunResult Solver::run(const InitialData& data, RunObserver* observer, RunOptions options) {
    if (!options.skip_validation) {
        params_.check();
        const ValidationReport vr = validate_assumptions(data, params_);
        if (!vr.passed()) {
            std::string msg = "run: initial data violates";
            for (const std::string& name : vr.failures()) msg += " [" + name + "]";
            throw ValidationFailed(msg);
        }
    }

    RunResult result{State::from_initial(data), {}, 0, 0.0, 0.0, 0.0};
    State& state = result.final_state;
    RunningIntegrals& cum = result.integrals;
    const double t_end = params_.t_end;

    auto emit = [&]() {
        if (!observer) return;
        observer->on_record(record(state, params_, cum, projector_), state);
    };
    emit();

    while (state.t < t_end) {
        const double remaining = t_end - state.t;
        auto [next, report] = step(state, remaining);
        if (report.dt_used == remaining) next.t = t_end;
        ++result.steps;
        if (!next.all_finite()) {
            throw NumericalBlowup("run: non-finite values at step " + std::to_string(result.steps),
                                  result.steps);
        }
        cum.accumulate(state, params_, report.dt_used);
        cum.clip_mass += report.clipped_mass;
        cum.c_clamp_max = std::max(cum.c_clamp_max, report.c_clamp);
        result.max_projection_residual = std::max(result.max_projection_residual, report.projection_residual);
        result.min_n_before_clip = std::min(result.min_n_before_clip, report.n_min_before_clip);
        result.max_c_clamp = std::max(result.max_c_clamp, report.c_clamp);
        if (observer) observer->on_step(state, next, report);
        state = std::move(next);
        if (result.steps % params_.snapshot_every == 0 || state.t >= t_end) emit();
    }
    return result;
}

} // namespace hsl
