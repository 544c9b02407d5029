#pragma once

#include "hsl/grid.hpp"

#include <string>
#include <vector>

namespace hsl {

enum class ChiKind { Constant, Saturating };          // chi0  |  chi0/(1+c)^2
enum class ConsumptionKind { Saturating, LinearCapped }; // c/(1+c)  |  min(c, c_B)
enum class PotentialKind { Zero, Gravity };           // 0  |  A sin(2 pi y / L)

/// Chemotactic sensitivity, oxygen consumption and the gravitational
/// potential. Every shipped option is W^{1,inf} on [0, c_B] with a
/// closed-form Lipschitz constant.
struct Coefficients {
    ChiKind chi_kind = ChiKind::Constant;
    double chi_0 = 1.0;
    ConsumptionKind f_kind = ConsumptionKind::Saturating;
    PotentialKind phi_kind = PotentialKind::Zero;
    double phi_amp = 0.0;
    double c_bound = 1.0;  // c_B

    double chi(double c) const noexcept;
    double f(double c) const noexcept;
    double phi(double x, double y, double box_length) const noexcept;
    /// Analytic gradient of phi at (x, y).
    void grad_phi(double x, double y, double box_length, double& gx, double& gy) const noexcept;

    double chi_sup() const noexcept;          // sup |chi| on [0, c_B]
    double chi_lipschitz() const noexcept;    // on [0, c_B]
    double f_lipschitz() const noexcept;      // on [0, c_B]
    double grad_phi_sup(double box_length) const noexcept;

    bool operator==(const Coefficients&) const = default;
};

std::string to_string(ChiKind k);
std::string to_string(ConsumptionKind k);
std::string to_string(PotentialKind k);

struct SimParams {
    Grid2D grid{64, 6.283185307179586};
    double m = 6.0;
    double eps_visc = 0.0;     // artificial viscosity on n
    double eps_mollify = 0.0;  // width of the aggregation mollifier
    Coefficients coeffs{};
    double dt_safety = 0.4;
    double t_end = 0.2;
    int snapshot_every = 100;
    double C0 = 10.0;
    double compl_threshold_rel = 1e-3;

    /// Throws InvalidArgument on out-of-range values, including m < 3.
    void check() const;
    /// Same checks with the exponent only required to exceed 1; used by the
    /// porous-medium oracles, which run at m = 2.
    void check_numerics() const;

    bool operator==(const SimParams&) const = default;
};

/// Smallest m for which the incompressible-limit estimates are stated in 2D.
inline constexpr double kLimitMinExponent = 5.0;

struct InitialData {
    ScalarField n0;
    ScalarField c0;
    VectorField u0;

    explicit InitialData(const Grid2D& grid) : n0(grid), c0(grid), u0(grid) {}
};

enum class OxygenProfile { Disc, Constant };
enum class VelocityProfile { Zero, TaylorGreen };

struct PatchSpec {
    double center_x = 3.141592653589793;
    double center_y = 3.141592653589793;
    double radius = 1.0;
    double n_amp = 0.8;
    OxygenProfile c_profile = OxygenProfile::Disc;
    double c_amp = 0.5;
    double c_radius = 1.0;
    double mollify_width = 0.2;
    VelocityProfile u_profile = VelocityProfile::Zero;
    double u_amp = 0.0;

    bool operator==(const PatchSpec&) const = default;
};

/// Mollified disc data for n0 (and c0 unless the constant profile is
/// selected) plus an optional projected Taylor-Green velocity. Throws
/// PatchTooLarge when the mollified patch comes within L/8 of the box edge
/// and ValidationFailed when the assembled data violates an assumption.
InitialData make_initial_patch(const SimParams& params, const PatchSpec& spec);

/// u = a (sin(2 pi x/L) cos(2 pi y/L), -cos(2 pi x/L) sin(2 pi y/L)).
VectorField taylor_green(const Grid2D& grid, double amplitude);

struct AssumptionCheck {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool passed = true;
};

struct ValidationReport {
    std::vector<AssumptionCheck> checks;

    bool passed() const noexcept;
    std::vector<std::string> failures() const;
};

/// Evaluates nonnegativity, the L^1 / L^{m-1} / H^1 / L^2 size bounds, the
/// L^{m+1} and H^{-1} conditions, and the second moments of the data, each
/// against C0 (or c_B for the pointwise oxygen bound). Never throws.
ValidationReport validate_assumptions(const InitialData& data, const SimParams& params);

struct CoefficientFields {
    ScalarField chi;
    ScalarField f;
    std::size_t clamped_cells = 0;  // cells where c was outside [0, c_B]
};

CoefficientFields eval_coefficients(const Coefficients& coeffs, const ScalarField& c);

} // namespace hsl
