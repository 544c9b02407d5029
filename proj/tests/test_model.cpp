#include "naive.hpp"

#include "hsl/errors.hpp"
#include "hsl/model.hpp"
#include "hsl/ops.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace hsl;

namespace {

constexpr double kPi = std::numbers::pi;

bool has_failure(const ValidationReport& r, const std::string& name) {
    const auto f = r.failures();
    return std::find(f.begin(), f.end(), name) != f.end();
}

std::vector<Coefficients> all_options() {
    std::vector<Coefficients> out;
    for (ChiKind chi : {ChiKind::Constant, ChiKind::Saturating})
        for (ConsumptionKind f : {ConsumptionKind::Saturating, ConsumptionKind::LinearCapped})
            for (double cb : {0.5, 1.0, 3.0}) {
                Coefficients co;
                co.chi_kind = chi;
                co.chi_0 = 1.7;
                co.f_kind = f;
                co.c_bound = cb;
                co.phi_kind = PotentialKind::Gravity;
                co.phi_amp = 0.3;
                out.push_back(co);
            }
    return out;
}

} // namespace

TEST_CASE("coefficient options are nonnegative and Lipschitz on [0, c_B]") {
    for (const Coefficients& co : all_options()) {
        CHECK(co.f(0.0) == 0.0);
        double prev_c = 0.0, prev_f = co.f(0.0), prev_chi = co.chi(0.0);
        for (int k = 1; k <= 1000; ++k) {
            const double c = co.c_bound * k / 1000.0;
            const double f = co.f(c), chi = co.chi(c);
            CHECK(f >= 0.0);
            CHECK(std::abs(f - prev_f) <= co.f_lipschitz() * (c - prev_c) * (1.0 + 1e-12));
            CHECK(std::abs(chi - prev_chi) <= co.chi_lipschitz() * (c - prev_c) * (1.0 + 1e-12));
            CHECK(std::abs(chi) <= co.chi_sup());
            prev_c = c;
            prev_f = f;
            prev_chi = chi;
        }
    }
}

TEST_CASE("potential gradient is analytic and bounded") {
    Coefficients co;
    co.phi_kind = PotentialKind::Gravity;
    co.phi_amp = 0.4;
    const double L = 2.0 * kPi;
    for (int k = 0; k < 50; ++k) {
        const double y = L * k / 50.0, d = 1e-6;
        double gx = 0.0, gy = 0.0;
        co.grad_phi(0.3, y, L, gx, gy);
        const double fd = (co.phi(0.3, y + d, L) - co.phi(0.3, y - d, L)) / (2.0 * d);
        CHECK(gx == 0.0);
        CHECK(gy == doctest::Approx(fd).epsilon(1e-6));
        CHECK(std::abs(gy) <= co.grad_phi_sup(L) * (1.0 + 1e-15));
        CHECK(std::abs(co.phi(0.3, y, L)) <= 0.4);
    }
    Coefficients zero;
    double gx = 1.0, gy = 1.0;
    zero.grad_phi(1.0, 1.0, L, gx, gy);
    CHECK(gx == 0.0);
    CHECK(gy == 0.0);
    CHECK(zero.phi(1.0, 2.0, L) == 0.0);
}

TEST_CASE("eval_coefficients") {
    const Grid2D g(8, 1.0);
    Coefficients co;
    co.chi_kind = ChiKind::Constant;
    co.chi_0 = 1.0;
    const CoefficientFields a = eval_coefficients(co, ScalarField(g, 0.37));
    for (double v : a.chi.values()) CHECK(v == 1.0);
    const CoefficientFields one = eval_coefficients(co, ScalarField(g, 1.0));
    for (double v : one.f.values()) CHECK(v == 0.5);
    const CoefficientFields zero = eval_coefficients(co, ScalarField(g, 0.0));
    for (double v : zero.f.values()) CHECK(v == 0.0);
    CHECK(zero.clamped_cells == 0);
    ScalarField out_of_range(g, 0.5);
    out_of_range[0] = -0.2;
    out_of_range[1] = 1.4;
    const CoefficientFields cl = eval_coefficients(co, out_of_range);
    CHECK(cl.clamped_cells == 2);
    CHECK(cl.f[0] == 0.0);
    CHECK(cl.f[1] == 0.5);
}

TEST_CASE("parameter ranges") {
    SimParams p;
    CHECK_NOTHROW(p.check());
    p.m = 2.5;
    CHECK_THROWS_AS(p.check(), InvalidArgument);
    CHECK_NOTHROW(p.check_numerics());
    p.m = 1.0;
    CHECK_THROWS_AS(p.check_numerics(), InvalidArgument);
    p = SimParams{};
    p.dt_safety = 0.0;
    CHECK_THROWS_AS(p.check(), InvalidArgument);
    p.dt_safety = 1.0;
    CHECK_NOTHROW(p.check());
    p.coeffs.c_bound = 0.0;
    CHECK_THROWS_AS(p.check(), InvalidArgument);
}

TEST_CASE("initial patch") {
    SimParams params;
    params.grid = Grid2D(64, 2.0 * kPi);

    SUBCASE("zero amplitude") {
        PatchSpec spec;
        spec.n_amp = 0.0;
        const InitialData d = make_initial_patch(params, spec);
        CHECK(lp_norm(d.n0, INFINITY) == 0.0);
        CHECK(validate_assumptions(d, params).passed());
    }
    SUBCASE("disc area") {
        PatchSpec spec;
        spec.n_amp = 1.0;
        spec.mollify_width = 0.0;
        spec.radius = 1.3;
        const InitialData d = make_initial_patch(params, spec);
        const double h = params.grid.h();
        CHECK(std::abs(integrate(d.n0) - kPi * 1.3 * 1.3) <= 2.0 * h * 2.0 * kPi * 1.3);
    }
    SUBCASE("oxygen above the bound") {
        PatchSpec spec;
        spec.c_amp = 2.0 * params.coeffs.c_bound;
        spec.mollify_width = 0.0;
        CHECK_THROWS_WITH_AS(make_initial_patch(params, spec), doctest::Contains("c0 <= c_B"), ValidationFailed);
    }
    SUBCASE("patch too close to the edge") {
        PatchSpec spec;
        spec.radius = 2.5;
        CHECK_THROWS_AS(make_initial_patch(params, spec), PatchTooLarge);
        spec.radius = 1.0;
        spec.center_x = 1.0;
        CHECK_THROWS_AS(make_initial_patch(params, spec), PatchTooLarge);
    }
    SUBCASE("projected Taylor-Green velocity") {
        PatchSpec spec;
        spec.u_profile = VelocityProfile::TaylorGreen;
        spec.u_amp = 0.8;
        const InitialData d = make_initial_patch(params, spec);
        CHECK(lp_norm(divergence(d.u0), INFINITY) <= 1e-10);
        CHECK(std::abs(integrate(divergence(d.u0))) <= 1e-10);
        CHECK(lp_norm(d.u0.x, INFINITY) == doctest::Approx(0.8).epsilon(0.01));
    }
    SUBCASE("constant oxygen") {
        PatchSpec spec;
        spec.c_profile = OxygenProfile::Constant;
        spec.c_amp = 0.25;
        const InitialData d = make_initial_patch(params, spec);
        CHECK(min_value(d.c0) == 0.25);
        CHECK(max_value(d.c0) == 0.25);
    }
}

TEST_CASE("randomized patches pass validation and keep their mass under mollification") {
    SimParams params;
    params.grid = Grid2D(48, 2.0 * kPi);
    const double L = params.grid.length();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int t = 0; t < 25; ++t) {
        PatchSpec spec;
        spec.radius = 0.3 + 0.9 * u01(rng);
        spec.c_radius = 0.3 + 0.9 * u01(rng);
        spec.mollify_width = 0.3 * u01(rng);
        spec.n_amp = u01(rng);
        spec.c_amp = u01(rng);
        const double reach = std::max(spec.radius, spec.c_radius) + 3.0 * spec.mollify_width;
        const double lo = L / 8.0 + reach, hi = L - L / 8.0 - reach;
        spec.center_x = lo + (hi - lo) * u01(rng);
        spec.center_y = lo + (hi - lo) * u01(rng);
        const InitialData d = make_initial_patch(params, spec);
        CHECK(validate_assumptions(d, params).passed());

        PatchSpec sharp = spec;
        sharp.mollify_width = 0.0;
        const InitialData s = make_initial_patch(params, sharp);
        CHECK(std::abs(integrate(d.n0) - integrate(s.n0)) <= 1e-12 * std::max(1.0, integrate(s.n0)));
    }
}

TEST_CASE("validate_assumptions") {
    SimParams params;
    params.grid = Grid2D(32, 2.0 * kPi);
    InitialData zero(params.grid);
    const ValidationReport r = validate_assumptions(zero, params);
    CHECK(r.passed());
    for (const AssumptionCheck& c : r.checks) CHECK(c.value == 0.0);
    CHECK(r.checks.size() == 13);

    InitialData neg(params.grid);
    neg.n0(3, 3) = -0.1;
    CHECK(has_failure(validate_assumptions(neg, params), "n0 >= 0"));

    InitialData big(params.grid);
    big.c0 = ScalarField(params.grid, 2.0);
    CHECK(has_failure(validate_assumptions(big, params), "c0 <= c_B"));

    InitialData swirl(params.grid);
    swirl.u0.x = ScalarField(params.grid);
    for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i) swirl.u0.x(i, j) = std::sin(params.grid.x(i));
    CHECK(has_failure(validate_assumptions(swirl, params), "div u0 = 0"));
}

TEST_CASE("L^(m+1) bound on a unit disc is uniform in m") {
    SimParams params;
    params.grid = Grid2D(64, 2.0 * kPi);
    PatchSpec spec;
    spec.n_amp = 1.0;
    spec.radius = 1.0;
    const InitialData d = make_initial_patch(params, spec);
    const double mass = integrate(d.n0);
    const naive::Box b{64, 2.0 * kPi};
    for (double m : {5.0, 20.0, 80.0}) {
        params.m = m;
        const ValidationReport r = validate_assumptions(d, params);
        const auto it = std::find_if(r.checks.begin(), r.checks.end(),
                                     [](const AssumptionCheck& c) { return c.name == "||n0||_L^(m+1)^(m+1) <= C0"; });
        REQUIRE(it != r.checks.end());
        double direct = 0.0;
        for (double v : d.n0.values()) direct += std::pow(v, m + 1.0);
        CHECK(it->value == doctest::Approx(b.h2() * direct).epsilon(1e-12));
        CHECK(it->value <= mass);
        CHECK(it->passed);
    }
}

TEST_CASE("enum names") {
    CHECK(to_string(ChiKind::Saturating) == "saturating");
    CHECK(to_string(ConsumptionKind::LinearCapped) == "linear-capped");
    CHECK(to_string(PotentialKind::Gravity) == "gravity");
}
