#pragma once

#include "hsl/diagnostics.hpp"
#include "hsl/model.hpp"
#include "hsl/ops.hpp"
#include "hsl/state.hpp"

#include <limits>
#include <string>
#include <utility>

namespace hsl {

enum class CflTerm { PmeDiffusion, Advection, OxygenDiffusion, Viscosity };

std::string to_string(CflTerm term);

struct CflBound {
    double dt = 0.0;
    CflTerm binding = CflTerm::OxygenDiffusion;
};

struct StepReport {
    double dt_used = 0.0;
    CflTerm cfl_binding_term = CflTerm::OxygenDiffusion;
    double projection_residual = 0.0;  // max |div u| after projection
    double n_min_before_clip = 0.0;
    double clipped_mass = 0.0;         // mass added back by clipping n < 0
    double c_clamp = 0.0;              // largest |c - clamp(c)| in this step
};

/// Observer hooks for `Solver::run`. Both callbacks default to no-ops.
class RunObserver {
public:
    virtual ~RunObserver() = default;
    virtual void on_step(const State& /*before*/, const State& /*after*/, const StepReport&) {}
    virtual void on_record(const DiagRecord&, const State&) {}
};

struct RunOptions {
    bool skip_validation = false;
};

struct RunResult {
    State final_state;
    RunningIntegrals integrals;
    long steps = 0;
    double max_projection_residual = 0.0;
    double min_n_before_clip = 0.0;
    double max_c_clamp = 0.0;
};

/// Forward-Euler Lie-split integrator for the coupled density / oxygen /
/// fluid system. All right-hand sides of one step are evaluated on the
/// begin-of-step state. Owns the FFT plans of its projection solver, so one
/// instance must not be shared between threads.
class Solver {
public:
    explicit Solver(SimParams params,
                    PoissonSolver::Method method = PoissonSolver::Method::Spectral);

    const SimParams& params() const noexcept { return params_; }

    /// dt_safety * min{h^2 / (4 (m max(n)^{m-1} + eps)), h^2/4, h^2/4,
    ///                 h / (2 max|u| + 2 max|chi grad c| + tiny)}.
    CflBound cfl(const State& state) const;
    double cfl_dt(const State& state) const { return cfl(state).dt; }

    /// n + dt [Lap n^m + eps Lap n - div(u n) - div(chi(c) n grad(J * c))],
    /// negatives clipped to zero. Throws CflViolation if dt exceeds the bound.
    ScalarField step_density(const State& state, double dt, StepReport* report = nullptr) const;

    /// c + dt [Lap c - div(u c) - n f(c)], clamped to [0, c_B].
    ScalarField step_oxygen(const State& state, double dt, StepReport* report = nullptr) const;

    /// Predictor u* = u + dt [Lap u - (u.grad)u - n grad phi] followed by a
    /// projection; returns (u_new, Pi).
    std::pair<VectorField, ScalarField> step_velocity_project(const State& state, double dt,
                                                              StepReport* report = nullptr);

    /// One full step with dt = min(cfl_dt, dt_cap).
    std::pair<State, StepReport> step(const State& state,
                                      double dt_cap = std::numeric_limits<double>::infinity());

    /// Steps until t >= t_end (the last step is shortened to land on t_end),
    /// recording diagnostics every `snapshot_every` steps and at the end.
    /// Throws ValidationFailed unless the data passes validate_assumptions or
    /// options.skip_validation is set; throws NumericalBlowup on non-finite
    /// values.
    RunResult run(const InitialData& data, RunObserver* observer = nullptr, RunOptions options = {});

    /// Chemotactic face velocities chi(c) grad(J * c).
    FaceVelocity chemotactic_velocity(const State& state) const;

private:
    void check_dt(const State& state, double dt) const;
    ScalarField density_update(const State& state, double dt, StepReport* report) const;
    ScalarField oxygen_update(const State& state, double dt, StepReport* report) const;
    std::pair<VectorField, ScalarField> velocity_update(const State& state, double dt,
                                                        StepReport* report);

    SimParams params_;
    PoissonSolver projector_;
};

} // namespace hsl
