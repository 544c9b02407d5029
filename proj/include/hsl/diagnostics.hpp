#pragma once

#include "hsl/grid.hpp"
#include "hsl/model.hpp"
#include "hsl/ops.hpp"
#include "hsl/state.hpp"

#include <array>
#include <string_view>

namespace hsl {

/// Cell pressure m/(m-1) n^{m-1}. Rejects negative n.
ScalarField compute_pressure(const ScalarField& n, double m);

/// integrate(P/(m-2) + |grad c|^2/2 + |u|^2/2); requires m > 2.
double compute_energy(const State& state, double m);

/// ||grad P||^2 + ||Lap c||^2/2 + ||grad u||^2/2 at one instant.
double dissipation_rate(const State& state, double m);

/// ||(n - 1)_+||_{L^2}.
double overshoot_l2(const ScalarField& n);

struct GraphResiduals {
    double pressure = 0.0;       // ||(1-n) P||_{L^1}
    double grad_pressure = 0.0;  // ||(1-n) |grad P| ||_{L^1}
};

/// Residuals of the saturation relation. (1-n) is not clamped.
GraphResiduals graph_residuals(const ScalarField& n, const ScalarField& P, const VectorField& gradP);

/// ||P (Lap P - div(chi(c) grad c))||_{L^1} over cells where P > threshold.
double complementarity_residual(const ScalarField& P, const ScalarField& c,
                                const Coefficients& coeffs, double threshold);

/// L^1 norm of the forward-in-time residual of the pressure transport
///   dP/dt + u.grad P = (m-1) P (Lap P - div(chi grad c)) + grad P.(grad P - chi grad c)
/// with spatial terms frozen at `before`. Only cells with P(before) > threshold
/// contribute.
double pressure_equation_residual(const State& before, const State& after,
                                  const Coefficients& coeffs, double m, double dt,
                                  double threshold = 0.0);

struct SecondMoments {
    double n_moment = 0.0;    // integrate(n r^2)
    double c_weighted = 0.0;  // sqrt(integrate(c^2 r^2))
};

/// r is the minimal-image distance to the box centre.
SecondMoments second_moments(const ScalarField& n, const ScalarField& c);

/// Fluid pressure from -Lap Pi = div div (u (x) u) + div(n grad phi), solved
/// with the same (wide) operator the projection inverts.
ScalarField elliptic_fluid_pressure(const State& state, const Coefficients& coeffs,
                                    PoissonSolver& wide_solver);

/// Quantities integrated in time along a run (left-endpoint rule), updated
/// once per step from the state at the beginning of the step.
struct RunningIntegrals {
    double time = 0.0;
    double dissipation = 0.0;    // int (||grad P||^2 + ||Lap c||^2/2 + ||grad u||^2/2)
    double grad_c_sq = 0.0;      // int ||grad c||^2
    double source_bound = 0.0;   // int of the energy source bound, see accumulate()
    double clip_mass = 0.0;      // mass removed by clipping negative n
    double c_clamp_max = 0.0;    // largest single clamp applied to c
    double overshoot_sq = 0.0;   // int ||(n-1)_+||^2
    double graph_p = 0.0;        // int ||(1-n) P||_1
    double graph_grad_p = 0.0;   // int ||(1-n)|grad P| ||_1
    double compl_res = 0.0;      // int complementarity residual
    double grad_nm_sq = 0.0;     // int ||grad n^m||^2

    /// Adds dt times the integrands evaluated at `state`. The energy source
    /// bound integrand is
    ///   (int chi grad P.grad c)_+ + ||n f(c)||^2 + ||u.grad c||^2
    ///     + |grad phi|_inf (||n||^2 + ||u||^2)/2,
    /// which with the dissipation dominates dE/dt along the continuous flow.
    void accumulate(const State& state, const SimParams& params, double dt);
};

/// One time slice of every logged functional. Column order is part of the
/// CSV contract.
struct DiagRecord {
    double t = 0.0;
    double mass_n = 0.0;
    double mass_c = 0.0;
    double c_min = 0.0;
    double c_max = 0.0;
    double n_max = 0.0;
    double energy_E = 0.0;
    double dissipation_cum = 0.0;
    double norm_n_Lm1 = 0.0;
    double norm_n_Lmp1 = 0.0;
    double norm_gradPm_L2 = 0.0;
    double norm_grad_nm_L2 = 0.0;
    double overshoot_L2 = 0.0;
    double graph_res_P = 0.0;
    double graph_res_gradP = 0.0;
    double compl_res = 0.0;
    double second_moment_n = 0.0;
    double weighted_c = 0.0;
    double pi_cross_check = 0.0;
    double clip_mass_cum = 0.0;

    static constexpr std::size_t kColumnCount = 20;
    static constexpr std::array<std::string_view, kColumnCount> kColumns = {
        "t",              "mass_n",          "mass_c",         "c_min",
        "c_max",          "n_max",           "energy_E",       "dissipation_cum",
        "norm_n_Lm1",     "norm_n_Lmp1",     "norm_gradPm_L2", "norm_grad_nm_L2",
        "overshoot_L2",   "graph_res_P",     "graph_res_gradP", "compl_res",
        "second_moment_n", "weighted_c",     "pi_cross_check", "clip_mass_cum"};

    std::array<double, kColumnCount> as_array() const;
    static DiagRecord from_array(const std::array<double, kColumnCount>& values);

    bool operator==(const DiagRecord&) const = default;
};

/// Assembles a full record. `wide_solver` backs the fluid-pressure cross-check.
DiagRecord record(const State& state, const SimParams& params, const RunningIntegrals& cum,
                  PoissonSolver& wide_solver);
DiagRecord record(const State& state, const SimParams& params, const RunningIntegrals& cum);

} // namespace hsl
