#include "hsl/diagnostics.hpp"

#include "hsl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsl {

namespace {

double h2_of(const Grid2D& g) { return g.h() * g.h(); }

double grad_sq_integral(const VectorField& g) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.x.size(); ++k) s += g.x[k] * g.x[k] + g.y[k] * g.y[k];
    return h2_of(g.grid()) * s;
}

// div(chi(c) grad c) with centred differences on both sides.
ScalarField chemotactic_divergence(const ScalarField& c, const Coefficients& coeffs) {
    VectorField flux = gradient(c);
    const CoefficientFields cf = eval_coefficients(coeffs, c);
    for (std::size_t k = 0; k < c.size(); ++k) {
        flux.x[k] *= cf.chi[k];
        flux.y[k] *= cf.chi[k];
    }
    return divergence(flux);
}

} // namespace

ScalarField compute_pressure(const ScalarField& n, double m) {
    if (!(m > 1.0)) throw InvalidArgument("compute_pressure: m must be > 1");
    const double scale = m / (m - 1.0);
    ScalarField P(n.grid());
    for (std::size_t k = 0; k < n.size(); ++k) {
        if (n[k] < 0.0) throw InvalidArgument("compute_pressure: negative density");
        P[k] = n[k] == 0.0 ? 0.0 : scale * std::pow(n[k], m - 1.0);
    }
    return P;
}

double compute_energy(const State& state, double m) {
    if (!(m > 2.0)) throw InvalidArgument("compute_energy: m must be > 2");
    const ScalarField P = compute_pressure(state.n, m);
    const VectorField gc = gradient(state.c);
    const double inv = 1.0 / (m - 2.0);
    double s = 0.0;
    for (std::size_t k = 0; k < P.size(); ++k) {
        s += P[k] * inv + 0.5 * (gc.x[k] * gc.x[k] + gc.y[k] * gc.y[k]) +
             0.5 * (state.u.x[k] * state.u.x[k] + state.u.y[k] * state.u.y[k]);
    }
    return h2_of(state.grid()) * s;
}

double dissipation_rate(const State& state, double m) {
    const ScalarField P = compute_pressure(state.n, m);
    const ScalarField lc = laplacian(state.c);
    double lap_sq = 0.0;
    for (double v : lc.values()) lap_sq += v * v;
    return grad_sq_integral(gradient(P)) + 0.5 * h2_of(state.grid()) * lap_sq +
           0.5 * (grad_sq_integral(gradient(state.u.x)) + grad_sq_integral(gradient(state.u.y)));
}

double overshoot_l2(const ScalarField& n) {
    double s = 0.0;
    for (double v : n.values()) {
        const double e = std::max(v - 1.0, 0.0);
        s += e * e;
    }
    return std::sqrt(h2_of(n.grid()) * s);
}

GraphResiduals graph_residuals(const ScalarField& n, const ScalarField& P, const VectorField& gradP) {
    double r1 = 0.0, r2 = 0.0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        const double gap = 1.0 - n[k];
        r1 += std::abs(gap * P[k]);
        r2 += std::abs(gap) * std::hypot(gradP.x[k], gradP.y[k]);
    }
    const double h2 = h2_of(n.grid());
    return {h2 * r1, h2 * r2};
}

double complementarity_residual(const ScalarField& P, const ScalarField& c,
                                const Coefficients& coeffs, double threshold) {
    if (!(threshold >= 0.0)) throw InvalidArgument("complementarity_residual: threshold must be >= 0");
    const ScalarField lp = laplacian(P);
    const ScalarField dchem = chemotactic_divergence(c, coeffs);
    double s = 0.0;
    for (std::size_t k = 0; k < P.size(); ++k) {
        if (P[k] > threshold) s += std::abs(P[k] * (lp[k] - dchem[k]));
    }
    return h2_of(P.grid()) * s;
}

double pressure_equation_residual(const State& before, const State& after,
                                  const Coefficients& coeffs, double m, double dt,
                                  double threshold) {
    if (!(dt > 0.0)) throw InvalidArgument("pressure_equation_residual: dt must be > 0");
    const ScalarField P0 = compute_pressure(before.n, m);
    const ScalarField P1 = compute_pressure(after.n, m);
    const VectorField gP = gradient(P0);
    const VectorField gc = gradient(before.c);
    const ScalarField lP = laplacian(P0);
    const ScalarField dchem = chemotactic_divergence(before.c, coeffs);
    const CoefficientFields cf = eval_coefficients(coeffs, before.c);
    double s = 0.0;
    for (std::size_t k = 0; k < P0.size(); ++k) {
        if (!(P0[k] > threshold)) continue;
        const double dPdt = (P1[k] - P0[k]) / dt;
        const double transport = before.u.x[k] * gP.x[k] + before.u.y[k] * gP.y[k];
        const double rhs = (m - 1.0) * P0[k] * (lP[k] - dchem[k]) +
                           gP.x[k] * (gP.x[k] - cf.chi[k] * gc.x[k]) +
                           gP.y[k] * (gP.y[k] - cf.chi[k] * gc.y[k]);
        s += std::abs(dPdt + transport - rhs);
    }
    return h2_of(P0.grid()) * s;
}

SecondMoments second_moments(const ScalarField& n, const ScalarField& c) {
    const Grid2D& g = n.grid();
    double sn = 0.0, sc = 0.0;
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            const double r2 = squared_radius_from_center(g, i, j);
            sn += n.at(i, j) * r2;
            sc += c.at(i, j) * c.at(i, j) * r2;
        }
    }
    const double h2 = h2_of(g);
    return {h2 * sn, std::sqrt(h2 * sc)};
}

ScalarField elliptic_fluid_pressure(const State& state, const Coefficients& coeffs,
                                    PoissonSolver& wide_solver) {
    const Grid2D& g = state.grid();
    const VectorField& u = state.u;
    ScalarField uu(g), uv(g), vv(g);
    for (std::size_t k = 0; k < uu.size(); ++k) {
        uu[k] = u.x[k] * u.x[k];
        uv[k] = u.x[k] * u.y[k];
        vv[k] = u.y[k] * u.y[k];
    }
    // Row-wise divergence of the tensor u (x) u.
    const VectorField d_uu = gradient(uu), d_uv = gradient(uv), d_vv = gradient(vv);
    VectorField row_div(g);
    for (std::size_t k = 0; k < uu.size(); ++k) {
        row_div.x[k] = d_uu.x[k] + d_uv.y[k];
        row_div.y[k] = d_uv.x[k] + d_vv.y[k];
    }
    VectorField n_gphi(g);
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            double gx = 0.0, gy = 0.0;
            coeffs.grad_phi(g.x(i), g.y(j), g.length(), gx, gy);
            n_gphi.x.at(i, j) = state.n.at(i, j) * gx;
            n_gphi.y.at(i, j) = state.n.at(i, j) * gy;
        }
    }
    ScalarField rhs = divergence(row_div) + divergence(n_gphi);
    return wide_solver.solve_centred(rhs);
}

void RunningIntegrals::accumulate(const State& state, const SimParams& params, double dt) {
    const double m = params.m;
    const Grid2D& g = state.grid();
    const double h2 = h2_of(g);
    const Coefficients& co = params.coeffs;

    const ScalarField P = compute_pressure(state.n, m);
    ScalarField nm(g);
    const double to_nm = (m - 1.0) / m;
    for (std::size_t k = 0; k < nm.size(); ++k) nm[k] = to_nm * state.n[k] * P[k];

    const VectorField gP = gradient(P);
    const VectorField gc = gradient(state.c);
    const VectorField gnm = gradient(nm);
    const ScalarField lc = laplacian(state.c);
    const CoefficientFields cf = eval_coefficients(co, state.c);
    const double gphi = co.grad_phi_sup(g.length());

    double s_gradP = 0.0, s_lapc = 0.0, s_gradc = 0.0, s_chem = 0.0, s_nf = 0.0, s_ugc = 0.0;
    double s_n2 = 0.0, s_u2 = 0.0, s_over = 0.0, s_gnm = 0.0, s_g1 = 0.0, s_g2 = 0.0;
    for (std::size_t k = 0; k < P.size(); ++k) {
        const double gpx = gP.x[k], gpy = gP.y[k];
        const double gcx = gc.x[k], gcy = gc.y[k];
        const double ux = state.u.x[k], uy = state.u.y[k];
        const double n = state.n[k];
        s_gradP += gpx * gpx + gpy * gpy;
        s_lapc += lc[k] * lc[k];
        s_gradc += gcx * gcx + gcy * gcy;
        s_chem += cf.chi[k] * (gpx * gcx + gpy * gcy);
        const double nf = n * cf.f[k];
        s_nf += nf * nf;
        const double ugc = ux * gcx + uy * gcy;
        s_ugc += ugc * ugc;
        s_n2 += n * n;
        s_u2 += ux * ux + uy * uy;
        const double over = std::max(n - 1.0, 0.0);
        s_over += over * over;
        s_gnm += gnm.x[k] * gnm.x[k] + gnm.y[k] * gnm.y[k];
        const double gap = 1.0 - n;
        s_g1 += std::abs(gap * P[k]);
        s_g2 += std::abs(gap) * std::hypot(gpx, gpy);
    }
    const double grad_u_sq = grad_sq_integral(gradient(state.u.x)) + grad_sq_integral(gradient(state.u.y));

    dissipation += dt * (h2 * s_gradP + 0.5 * h2 * s_lapc + 0.5 * grad_u_sq);
    grad_c_sq += dt * h2 * s_gradc;
    source_bound += dt * (std::max(h2 * s_chem, 0.0) + h2 * s_nf + h2 * s_ugc +
                          0.5 * gphi * h2 * (s_n2 + s_u2));
    overshoot_sq += dt * h2 * s_over;
    graph_p += dt * h2 * s_g1;
    graph_grad_p += dt * h2 * s_g2;
    grad_nm_sq += dt * h2 * s_gnm;
    const double pmax = lp_norm(P, INFINITY);
    compl_res += dt * complementarity_residual(P, state.c, co, params.compl_threshold_rel * pmax);
    time += dt;
}

std::array<double, DiagRecord::kColumnCount> DiagRecord::as_array() const {
    return {t,           mass_n,          mass_c,          c_min,          c_max,
            n_max,       energy_E,        dissipation_cum, norm_n_Lm1,     norm_n_Lmp1,
            norm_gradPm_L2, norm_grad_nm_L2, overshoot_L2, graph_res_P,    graph_res_gradP,
            compl_res,   second_moment_n, weighted_c,      pi_cross_check, clip_mass_cum};
}

DiagRecord DiagRecord::from_array(const std::array<double, kColumnCount>& v) {
    DiagRecord r;
    r.t = v[0];
    r.mass_n = v[1];
    r.mass_c = v[2];
    r.c_min = v[3];
    r.c_max = v[4];
    r.n_max = v[5];
    r.energy_E = v[6];
    r.dissipation_cum = v[7];
    r.norm_n_Lm1 = v[8];
    r.norm_n_Lmp1 = v[9];
    r.norm_gradPm_L2 = v[10];
    r.norm_grad_nm_L2 = v[11];
    r.overshoot_L2 = v[12];
    r.graph_res_P = v[13];
    r.graph_res_gradP = v[14];
    r.compl_res = v[15];
    r.second_moment_n = v[16];
    r.weighted_c = v[17];
    r.pi_cross_check = v[18];
    r.clip_mass_cum = v[19];
    return r;
}

DiagRecord record(const State& state, const SimParams& params, const RunningIntegrals& cum,
                  PoissonSolver& wide_solver) {
    const double m = params.m;
    const ScalarField P = compute_pressure(state.n, m);
    const VectorField gP = gradient(P);
    ScalarField nm(state.grid());
    for (std::size_t k = 0; k < nm.size(); ++k) nm[k] = state.n[k] > 0.0 ? std::pow(state.n[k], m) : 0.0;

    DiagRecord r;
    r.t = state.t;
    r.mass_n = integrate(state.n);
    r.mass_c = integrate(state.c);
    r.c_min = min_value(state.c);
    r.c_max = max_value(state.c);
    r.n_max = max_value(state.n);
    r.energy_E = compute_energy(state, m);
    r.dissipation_cum = cum.dissipation;
    r.norm_n_Lm1 = lp_norm(state.n, m - 1.0);
    r.norm_n_Lmp1 = lp_norm(state.n, m + 1.0);
    r.norm_gradPm_L2 = lp_norm(magnitude(gP), 2.0);
    r.norm_grad_nm_L2 = lp_norm(magnitude(gradient(nm)), 2.0);
    r.overshoot_L2 = overshoot_l2(state.n);
    const GraphResiduals gr = graph_residuals(state.n, P, gP);
    r.graph_res_P = gr.pressure;
    r.graph_res_gradP = gr.grad_pressure;
    r.compl_res = complementarity_residual(P, state.c, params.coeffs,
                                           params.compl_threshold_rel * lp_norm(P, INFINITY));
    const SecondMoments mom = second_moments(state.n, state.c);
    r.second_moment_n = mom.n_moment;
    r.weighted_c = mom.c_weighted;
    const ScalarField pi_elliptic = elliptic_fluid_pressure(state, params.coeffs, wide_solver);
    r.pi_cross_check = lp_norm(remove_mean(state.pi) - pi_elliptic, 2.0);
    r.clip_mass_cum = cum.clip_mass;
    return r;
}

DiagRecord record(const State& state, const SimParams& params, const RunningIntegrals& cum) {
    PoissonSolver solver(state.grid(), PoissonSolver::Method::Spectral, PoissonSolver::Stencil::Wide);
    return record(state, params, cum, solver);
}

} // namespace hsl
