#include "naive.hpp"

#include "hsl/diagnostics.hpp"
#include "hsl/errors.hpp"
#include "hsl/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hsl;

namespace {

constexpr double kPi = std::numbers::pi;

class Collect : public RunObserver {
public:
    void on_record(const DiagRecord& r, const State&) override { records.push_back(r); }
    std::vector<DiagRecord> records;
};

SimParams coupled_params(int n) {
    SimParams p;
    p.grid = Grid2D(n, 2.0 * kPi);
    p.snapshot_every = 1;
    p.t_end = 0.1;
    return p;
}

InitialData coupled_data(const SimParams& p) {
    PatchSpec spec;
    spec.u_profile = VelocityProfile::TaylorGreen;
    spec.u_amp = 0.5;
    spec.c_radius = 0.8;
    return make_initial_patch(p, spec);
}

} // namespace

TEST_CASE("pressure") {
    const Grid2D g(8, 1.0);
    CHECK(lp_norm(compute_pressure(ScalarField(g, 0.0), 3.0), INFINITY) == 0.0);
    const ScalarField p1 = compute_pressure(ScalarField(g, 1.0), 3.0);
    for (double v : p1.values()) CHECK(v == 1.5);
    const ScalarField p2 = compute_pressure(ScalarField(g, 2.0), 4.0);
    for (double v : p2.values()) CHECK(v == doctest::Approx(32.0 / 3.0).epsilon(1e-15));
    ScalarField neg(g, 0.5);
    neg(3, 3) = -1e-3;
    CHECK_THROWS_AS(compute_pressure(neg, 3.0), InvalidArgument);
}

TEST_CASE("energy and dissipation rate") {
    const Grid2D unit(16, 1.0);
    State z(unit);
    CHECK(compute_energy(z, 3.0) == 0.0);
    CHECK(dissipation_rate(z, 3.0) == 0.0);
    CHECK_THROWS_AS(compute_energy(z, 2.0), InvalidArgument);

    State flat(unit);
    flat.c = ScalarField(unit, 0.7);
    CHECK(compute_energy(flat, 3.0) == 0.0);
    flat.n = ScalarField(unit, 1.0);
    flat.c = ScalarField(unit, 0.0);
    CHECK(compute_energy(flat, 3.0) == doctest::Approx(1.5).epsilon(1e-14));
    flat.n = ScalarField(unit, 0.4);
    flat.c = ScalarField(unit, 0.3);
    flat.u.x = ScalarField(unit, 0.2);
    CHECK(dissipation_rate(flat, 4.0) == 0.0);

    const Grid2D g(32, 2.0 * kPi);
    State s(g);
    for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i) s.c(i, j) = std::sin(g.x(i));
    const double h = g.h();
    const double lam = 4.0 / (h * h) * std::pow(std::sin(0.5 * h), 2);
    double c2 = 0.0;
    for (double v : s.c.values()) c2 += v * v;
    c2 *= h * h;
    CHECK(dissipation_rate(s, 3.0) == doctest::Approx(0.5 * lam * lam * c2).epsilon(1e-12));
}

TEST_CASE("overshoot") {
    const Grid2D unit(16, 1.0);
    CHECK(overshoot_l2(ScalarField(unit, 1.0)) == 0.0);
    CHECK(overshoot_l2(ScalarField(unit, 0.3)) == 0.0);
    CHECK(overshoot_l2(ScalarField(unit, 1.5)) == doctest::Approx(0.5).epsilon(1e-14));
    std::mt19937_64 rng(21);
    const naive::Box b{16, 1.0};
    for (int t = 0; t < 20; ++t) {
        const naive::Arr a = naive::random_arr(rng, 256, 0.0, 2.0);
        CHECK(std::abs(overshoot_l2(ScalarField(unit, a)) - naive::overshoot(b, a)) <= 1e-14);
    }
}

TEST_CASE("graph residuals") {
    const Grid2D unit(16, 1.0);
    auto eval = [](const ScalarField& n, double m) {
        const ScalarField P = compute_pressure(n, m);
        return graph_residuals(n, P, gradient(P));
    };
    GraphResiduals r = eval(ScalarField(unit, 1.0), 3.0);
    CHECK(r.pressure == 0.0);
    CHECK(r.grad_pressure == 0.0);
    r = eval(ScalarField(unit, 0.0), 3.0);
    CHECK(r.pressure == 0.0);
    CHECK(r.grad_pressure == 0.0);
    r = eval(ScalarField(unit, 0.5), 3.0);
    CHECK(r.pressure == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(r.grad_pressure == 0.0);

    SUBCASE("triangle bound") {
        std::mt19937_64 rng(22);
        const naive::Box b{16, 1.0};
        for (int t = 0; t < 50; ++t) {
            const naive::Arr a = naive::random_arr(rng, 256, 0.0, 1.5);
            const ScalarField n(unit, a);
            const ScalarField P = compute_pressure(n, 5.0);
            const GraphResiduals gr = graph_residuals(n, P, gradient(P));
            naive::Arr below(a.size()), above(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) {
                below[k] = std::max(1.0 - a[k], 0.0);
                above[k] = std::max(a[k] - 1.0, 0.0);
            }
            const double pinf = lp_norm(P, INFINITY);
            CHECK(gr.pressure <= pinf * naive::norm_p(b, below, 1.0) + pinf * naive::norm_p(b, above, 1.0));
            const auto [gp, ggp] = naive::graph(b, a, 5.0);
            CHECK(naive::rel_diff(gr.pressure, gp) <= 1e-13);
            CHECK(naive::rel_diff(gr.grad_pressure, ggp) <= 1e-13);
        }
    }
}

TEST_CASE("complementarity residual") {
    const Grid2D g(16, 2.0 * kPi);
    Coefficients co;
    CHECK(complementarity_residual(ScalarField(g, 0.0), ScalarField(g, 0.5), co, 0.0) == 0.0);
    CHECK(complementarity_residual(ScalarField(g, 2.0), ScalarField(g, 0.5), co, 0.0) == 0.0);
    CHECK_THROWS_AS(complementarity_residual(ScalarField(g, 0.0), ScalarField(g, 0.5), co, -1.0), InvalidArgument);

    const naive::Box b{16, 2.0 * kPi};
    naive::Arr cap(256);
    for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 16; ++i) cap[b.idx(i, j)] = std::max(4.0 - naive::r2(b, i, j), 0.0);
    Coefficients off;
    off.chi_0 = 0.0;
    const naive::Arr zero(256, 0.0);
    const double thr = 1e-3 * 4.0;
    CHECK(naive::rel_diff(complementarity_residual(ScalarField(g, cap), ScalarField(g, zero), off, thr),
                          naive::complementarity(b, cap, zero, off, thr)) <= 1e-13);

    std::mt19937_64 rng(23);
    for (ChiKind kind : {ChiKind::Constant, ChiKind::Saturating}) {
        co.chi_kind = kind;
        co.chi_0 = 2.5;
        const naive::Arr p = naive::random_arr(rng, 256, 0.0, 3.0), c = naive::random_arr(rng, 256, 0.0, 1.0);
        CHECK(naive::rel_diff(complementarity_residual(ScalarField(g, p), ScalarField(g, c), co, 0.5),
                              naive::complementarity(b, p, c, co, 0.5)) <= 1e-13);
    }
}

TEST_CASE("pressure equation residual") {
    const Grid2D g(16, 2.0 * kPi);
    Coefficients co;
    State a(g);
    CHECK(pressure_equation_residual(a, a, co, 3.0, 0.01) == 0.0);
    a.n = ScalarField(g, 0.6);
    a.c = ScalarField(g, 0.4);
    State b = a;
    b.t = 0.01;
    CHECK(pressure_equation_residual(a, b, co, 3.0, 0.01) == 0.0);
    CHECK_THROWS_AS(pressure_equation_residual(a, b, co, 3.0, 0.0), InvalidArgument);

    SUBCASE("Barenblatt pair under refinement") {
        auto exact = [](double r2, double t) {
            const double C = 1.0 / std::sqrt(8.0 * kPi);
            return std::max(C - r2 / (16.0 * std::sqrt(t)), 0.0) / std::sqrt(t);
        };
        Coefficients none;
        none.chi_0 = 0.0;
        double prev = INFINITY;
        for (int n : {32, 64, 128}) {
            const Grid2D gn(n, 2.0 * kPi);
            const naive::Box bx{n, 2.0 * kPi};
            const double dt = 0.05 * gn.h() * gn.h();
            State s0(gn), s1(gn);
            s0.t = 1.0;
            s1.t = 1.0 + dt;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    s0.n(i, j) = exact(naive::r2(bx, i, j), 1.0);
                    s1.n(i, j) = exact(naive::r2(bx, i, j), 1.0 + dt);
                }
            const double thr = 0.3 * lp_norm(compute_pressure(s0.n, 2.0), INFINITY);
            const double res = pressure_equation_residual(s0, s1, none, 2.0, dt, thr);
            MESSAGE("N " << n << ": interior residual " << res);
            CHECK(res < prev);
            prev = res;
        }
    }
}

TEST_CASE("second moments") {
    const Grid2D g(16, 2.0 * kPi);
    SecondMoments z = second_moments(ScalarField(g, 0.0), ScalarField(g, 0.0));
    CHECK(z.n_moment == 0.0);
    CHECK(z.c_weighted == 0.0);

    ScalarField spike(g, 0.0);
    spike(8, 8) = 1.0 / (g.h() * g.h());
    const SecondMoments s = second_moments(spike, ScalarField(g, 0.0));
    CHECK(s.n_moment <= 0.5 * g.h() * g.h() * (1.0 + 1e-12));

    const Grid2D unit(64, 1.0);
    const SecondMoments u = second_moments(ScalarField(unit, 1.0), ScalarField(unit, 1.0));
    CHECK(std::abs(u.n_moment - 1.0 / 6.0) <= 0.02 / 6.0);
    CHECK(u.c_weighted == doctest::Approx(std::sqrt(u.n_moment)).epsilon(1e-14));

    std::mt19937_64 rng(24);
    const naive::Box b{16, 2.0 * kPi};
    const naive::Arr n = naive::random_arr(rng, 256, 0, 1), c = naive::random_arr(rng, 256, 0, 1);
    const SecondMoments r = second_moments(ScalarField(g, n), ScalarField(g, c));
    const auto [nm, cw] = naive::moments(b, n, c);
    CHECK(naive::rel_diff(r.n_moment, nm) <= 1e-13);
    CHECK(naive::rel_diff(r.c_weighted, cw) <= 1e-13);
}

TEST_CASE("record") {
    SimParams p;
    p.grid = Grid2D(16, 2.0 * kPi);
    p.m = 4.0;
    State z(p.grid);
    z.t = 0.25;
    const DiagRecord zr = record(z, p, RunningIntegrals{});
    CHECK(zr.t == 0.25);
    const auto vals = zr.as_array();
    for (std::size_t k = 1; k < vals.size(); ++k) CHECK(vals[k] == 0.0);
    CHECK(DiagRecord::from_array(vals) == zr);

    SUBCASE("fields agree with direct loops") {
        std::mt19937_64 rng(25);
        const naive::Box b{16, 2.0 * kPi};
        p.coeffs.chi_kind = ChiKind::Saturating;
        p.coeffs.chi_0 = 1.7;
        for (int t = 0; t < 10; ++t) {
            const naive::Arr n = naive::random_arr(rng, 256, 0.0, 1.3), c = naive::random_arr(rng, 256, 0.0, 1.0),
                             ux = naive::random_arr(rng, 256, -1.0, 1.0), uy = naive::random_arr(rng, 256, -1.0, 1.0);
            State s(p.grid);
            s.n = ScalarField(p.grid, n);
            s.c = ScalarField(p.grid, c);
            s.u = VectorField(ScalarField(p.grid, ux), ScalarField(p.grid, uy));
            RunningIntegrals cum;
            cum.dissipation = 0.125;
            cum.clip_mass = 1e-15;
            const DiagRecord r = record(s, p, cum);
            const double m = p.m;
            naive::Arr nm(256);
            for (std::size_t k = 0; k < 256; ++k) nm[k] = std::pow(n[k], m);
            const naive::Arr P = naive::pressure(n, m);
            const auto [gp, ggp] = naive::graph(b, n, m);
            double pmax = 0.0;
            for (double v : P) pmax = std::max(pmax, v);
            const auto [mom, cw] = naive::moments(b, n, c);
            const double tol = 1e-13;
            CHECK(naive::rel_diff(r.mass_n, naive::integral(b, n)) <= tol);
            CHECK(naive::rel_diff(r.mass_c, naive::integral(b, c)) <= tol);
            CHECK(r.c_min == *std::min_element(c.begin(), c.end()));
            CHECK(r.c_max == *std::max_element(c.begin(), c.end()));
            CHECK(r.n_max == *std::max_element(n.begin(), n.end()));
            CHECK(naive::rel_diff(r.energy_E, naive::energy(b, n, c, ux, uy, m)) <= tol);
            CHECK(r.dissipation_cum == 0.125);
            CHECK(naive::rel_diff(r.norm_n_Lm1, naive::norm_p(b, n, m - 1.0)) <= tol);
            CHECK(naive::rel_diff(r.norm_n_Lmp1, naive::norm_p(b, n, m + 1.0)) <= tol);
            CHECK(naive::rel_diff(r.norm_gradPm_L2, std::sqrt(naive::grad_sq(b, P))) <= tol);
            CHECK(naive::rel_diff(r.norm_grad_nm_L2, std::sqrt(naive::grad_sq(b, nm))) <= tol);
            CHECK(naive::rel_diff(r.overshoot_L2, naive::overshoot(b, n)) <= tol);
            CHECK(naive::rel_diff(r.graph_res_P, gp) <= tol);
            CHECK(naive::rel_diff(r.graph_res_gradP, ggp) <= tol);
            CHECK(naive::rel_diff(r.compl_res,
                                  naive::complementarity(b, P, c, p.coeffs, p.compl_threshold_rel * pmax)) <= tol);
            CHECK(naive::rel_diff(r.second_moment_n, mom) <= tol);
            CHECK(naive::rel_diff(r.weighted_c, cw) <= tol);
            CHECK(r.clip_mass_cum == 1e-15);
            CHECK(naive::rel_diff(dissipation_rate(s, m), naive::dissipation(b, n, c, ux, uy, m)) <= tol);
        }
    }
}

TEST_CASE("run-level properties") {
    const SimParams p = coupled_params(32);
    const InitialData data = coupled_data(p);
    Collect sink;
    const RunResult res = Solver(p).run(data, &sink);
    REQUIRE(sink.records.size() >= 2);

    const double e0 = sink.records.front().energy_E;
    const double k_source = 1.1 * res.integrals.source_bound;
    for (std::size_t k = 0; k < sink.records.size(); ++k) {
        const DiagRecord& r = sink.records[k];
        CHECK(r.energy_E + r.dissipation_cum <= e0 + k_source * (1.0 + r.t));
        CHECK(std::abs(r.mass_n / sink.records.front().mass_n - 1.0) <= 1e-12);
        if (k > 0) {
            CHECK(r.dissipation_cum >= sink.records[k - 1].dissipation_cum);
            CHECK(r.mass_c <= sink.records[k - 1].mass_c * (1.0 + 1e-14));
        }
    }
    CHECK(std::sqrt(res.integrals.grad_c_sq) <= 1.05 * lp_norm(data.c0, 2.0));
    CHECK(res.integrals.time == doctest::Approx(p.t_end).epsilon(1e-14));
}
