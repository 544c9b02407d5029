#pragma once

#include "hsl/model.hpp"

#include <string>
#include <vector>

namespace hsl {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Operator and invariant checks on small grids, for the `selftest` command.
std::vector<CheckResult> run_selftest();

struct TaylorGreenReport {
    long steps = 0;
    double ke_initial = 0.0;
    double ke_final = 0.0;
    double ke_expected = 0.0;  // ke_initial * prod (1 - dt lambda_1)^2
    double rel_error = 0.0;
};

/// Pure fluid run (n = c = 0) from the Taylor-Green vortex of amplitude `amp`.
/// The vortex is an eigenmode of the 5-point Laplacian with eigenvalue
/// lambda_1 = (8/h^2) sin^2(pi/N), and its advection term is a discrete
/// gradient, so forward Euler damps the kinetic energy by (1 - dt lambda_1)^2
/// per step.
TaylorGreenReport taylor_green_decay(int n, double length, double t_end, double amp);

struct OxygenOdeReport {
    long steps = 0;
    double dt_total = 0.0;
    double c_final = 0.0;
    double c_reference = 0.0;
    double rel_error = 0.0;
};

/// Spatially uniform n and c: the oxygen equation reduces to c' = -n f(c).
/// Takes `steps` solver steps and compares against RK4 with dt/100 substeps.
OxygenOdeReport oxygen_ode(int n, double n_bar, double c_bar, int steps, ConsumptionKind kind);

} // namespace hsl
