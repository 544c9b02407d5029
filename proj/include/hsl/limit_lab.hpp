#pragma once

#include "hsl/model.hpp"
#include "hsl/solver.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hsl {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares on (log x, log y). Needs at least three points with
/// strictly positive coordinates and at least two distinct x values.
SlopeFit fit_slope(std::span<const std::pair<double, double>> points);

struct PerMMetrics {
    double m = 0.0;
    bool ok = false;
    std::string error;            // set when the run failed
    long steps = 0;
    double overshoot_st = 0.0;    // ||(n_m - 1)_+||_{L^2(Q_T)}
    double graph_P_st = 0.0;      // int_0^T ||(1-n) P||_1
    double graph_gradP_st = 0.0;  // int_0^T ||(1-n)|grad P| ||_1
    double compl_st = 0.0;        // int_0^T complementarity residual
    double grad_nm_st = 0.0;      // ||grad n_m^m||_{L^2(Q_T)}
    double snapshot_mismatch = 0.0;  // largest |t_step - t_target| over the shared times
};

struct CrossMMetrics {
    double m_lo = 0.0;
    double m_hi = 0.0;
    double hminus1_dist = 0.0;  // ||n_lo - n_hi||_{L^2(0,T; H^-1)}
    double grad_nm_dist = 0.0;  // ||grad n_lo^m_lo - grad n_hi^m_hi||_{L^2(Q_T)}
};

struct MetricSlope {
    std::string metric;
    std::optional<SlopeFit> fit;  // empty when the fit is undefined
};

struct SweepResult {
    std::vector<double> m_values;
    std::vector<PerMMetrics> per_m;
    std::vector<CrossMMetrics> cross_m;
    std::vector<MetricSlope> slopes;
    double snapshot_dt = 0.0;
    bool partial = false;  // at least one m failed

    const MetricSlope* slope(const std::string& metric) const;
};

struct SweepOptions {
    double snapshot_dt = 0.0;  // spacing of shared snapshot times; 0 picks t_end / 20
    int workers = 1;
    bool skip_validation = false;
};

/// Runs `base` once per exponent in `m_list` (sorted internally; every m must
/// be >= 5 and distinct) on identical data, accumulates the space-time
/// metrics, and compares adjacent exponents at shared snapshot times. A
/// failing run is recorded in its PerMMetrics entry and flags the result as
/// partial; the other runs proceed.
SweepResult sweep(const SimParams& base, const InitialData& data, std::vector<double> m_list,
                  const SweepOptions& options = {});

/// Self-similar porous-medium solution in two dimensions,
///   n(t, x) = t^{-a} (C - k |x|^2 t^{-2b})_+^{1/(m-1)},
/// with a = 1/m, b = a/2, k = a (m-1) / (4m), centred in the box.
struct Barenblatt {
    double m = 2.0;
    double C = 0.0;

    static Barenblatt with_mass(double m, double mass);

    double alpha() const noexcept { return 1.0 / m; }
    double beta() const noexcept { return 0.5 / m; }
    double k() const noexcept { return alpha() * (m - 1.0) / (4.0 * m); }
    double mass() const noexcept;
    double support_radius(double t) const noexcept;
    double value(double r2, double t) const noexcept;
    ScalarField sample(const Grid2D& grid, double t) const;
};

struct BarenblattReport {
    int n_cells = 0;
    long steps = 0;
    double l1_error = 0.0;
    double linf_error = 0.0;
    double initial_mass = 0.0;  // discrete mass of the sampled profile
    double final_mass = 0.0;
    double exact_mass = 0.0;
};

/// Starts from the exact profile at t0, integrates the density equation alone
/// (chi = 0, u = 0, c = 0) to t1, and compares with the exact profile at t1.
/// m must be 2 or 3. Throws SupportEscape when the support at t1 reaches the
/// outer L/8 of the box.
BarenblattReport barenblatt_validate(double m, const Grid2D& grid, double t0, double t1,
                                     double mass, double dt_safety = 0.4);

struct BarenblattRefinement {
    BarenblattReport coarse;
    BarenblattReport fine;
    double ratio = 0.0;  // coarse L^1 error / fine L^1 error
};

BarenblattRefinement barenblatt_refinement(double m, int n_coarse, double length, double t0,
                                           double t1, double mass, double dt_safety = 0.4);

} // namespace hsl
