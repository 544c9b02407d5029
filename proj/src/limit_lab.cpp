#include "hsl/limit_lab.hpp"

#include "hsl/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace hsl {

SlopeFit fit_slope(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw InvalidArgument("fit_slope: need at least 3 points");
    const double count = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) throw InvalidArgument("fit_slope: coordinates must be positive");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / count, my = sy / count;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx, dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw InvalidArgument("fit_slope: all x values are equal");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

const MetricSlope* SweepResult::slope(const std::string& metric) const {
    for (const MetricSlope& s : slopes)
        if (s.metric == metric) return &s;
    return nullptr;
}

namespace {

// Captures n at the shared snapshot times, matching each target time to the
// nearer of the two step endpoints that bracket it.
class SnapshotCollector : public RunObserver {
public:
    SnapshotCollector(std::vector<double> targets) : targets_(std::move(targets)) {}

    void on_step(const State& before, const State& after, const StepReport&) override {
        while (next_ < targets_.size() && targets_[next_] <= after.t) {
            const double tau = targets_[next_];
            const State& pick = (tau - before.t) <= (after.t - tau) ? before : after;
            mismatch_ = std::max(mismatch_, std::abs(pick.t - tau));
            frames_.push_back(pick.n);
            ++next_;
        }
    }

    // Targets at or past the final time (including t_end = 0) take the final state.
    void finish(const State& final_state) {
        while (next_ < targets_.size()) {
            mismatch_ = std::max(mismatch_, std::abs(final_state.t - targets_[next_]));
            frames_.push_back(final_state.n);
            ++next_;
        }
    }

    std::vector<ScalarField>& frames() { return frames_; }
    double mismatch() const { return mismatch_; }

private:
    std::vector<double> targets_;
    std::size_t next_ = 0;
    std::vector<ScalarField> frames_;
    double mismatch_ = 0.0;
};

struct RunOutput {
    PerMMetrics metrics;
    std::vector<ScalarField> frames;
};

VectorField grad_power(const ScalarField& n, double m) {
    ScalarField nm(n.grid());
    for (std::size_t k = 0; k < nm.size(); ++k) nm[k] = n[k] > 0.0 ? std::pow(n[k], m) : 0.0;
    return gradient(nm);
}

} // namespace

SweepResult sweep(const SimParams& base, const InitialData& data, std::vector<double> m_list,
                  const SweepOptions& options) {
    std::sort(m_list.begin(), m_list.end());
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        if (!(m_list[i] >= kLimitMinExponent)) {
            throw InvalidArgument("sweep: every exponent must be >= 5");
        }
        if (i > 0 && m_list[i] == m_list[i - 1]) throw InvalidArgument("sweep: duplicate exponent");
    }

    SweepResult result;
    result.m_values = m_list;
    const double t_end = base.t_end;
    const double snap_dt = options.snapshot_dt > 0.0 ? options.snapshot_dt : t_end / 20.0;
    result.snapshot_dt = snap_dt;

    // Left-endpoint samples 0, dt, ..., strictly before t_end.
    std::vector<double> targets;
    if (snap_dt > 0.0) {
        for (long s = 0;; ++s) {
            const double tau = static_cast<double>(s) * snap_dt;
            if (tau >= t_end * (1.0 - 1e-12)) break;
            targets.push_back(tau);
        }
    }

    std::vector<RunOutput> outputs(m_list.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t idx = next++; idx < m_list.size(); idx = next++) {
            RunOutput& out = outputs[idx];
            out.metrics.m = m_list[idx];
            try {
                SimParams params = base;
                params.m = m_list[idx];
                Solver solver(params);
                SnapshotCollector collector(targets);
                RunOptions ro;
                ro.skip_validation = options.skip_validation;
                RunResult run = solver.run(data, &collector, ro);
                collector.finish(run.final_state);
                const RunningIntegrals& cum = run.integrals;
                out.metrics.ok = true;
                out.metrics.steps = run.steps;
                out.metrics.overshoot_st = std::sqrt(cum.overshoot_sq);
                out.metrics.graph_P_st = cum.graph_p;
                out.metrics.graph_gradP_st = cum.graph_grad_p;
                out.metrics.compl_st = cum.compl_res;
                out.metrics.grad_nm_st = std::sqrt(cum.grad_nm_sq);
                out.metrics.snapshot_mismatch = collector.mismatch();
                out.frames = std::move(collector.frames());
            } catch (const std::exception& e) {
                out.metrics.ok = false;
                out.metrics.error = e.what();
            }
        }
    };

    const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(m_list.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (const RunOutput& out : outputs) {
        result.per_m.push_back(out.metrics);
        if (!out.metrics.ok) result.partial = true;
    }

    // Adjacent-pair distances on the shared snapshot times.
    PoissonSolver solver(base.grid);
    for (std::size_t i = 0; i + 1 < outputs.size(); ++i) {
        const RunOutput& lo = outputs[i];
        const RunOutput& hi = outputs[i + 1];
        if (!lo.metrics.ok || !hi.metrics.ok) continue;
        CrossMMetrics cm;
        cm.m_lo = lo.metrics.m;
        cm.m_hi = hi.metrics.m;
        double acc_h = 0.0, acc_g = 0.0;
        for (std::size_t s = 0; s < targets.size(); ++s) {
            const ScalarField diff = lo.frames[s] - hi.frames[s];
            const double dh = hminus1_norm(diff, solver);
            const VectorField ga = grad_power(lo.frames[s], cm.m_lo);
            const VectorField gb = grad_power(hi.frames[s], cm.m_hi);
            const double dx = lp_norm(ga.x - gb.x, 2.0), dy = lp_norm(ga.y - gb.y, 2.0);
            acc_h += snap_dt * dh * dh;
            acc_g += snap_dt * (dx * dx + dy * dy);
        }
        cm.hminus1_dist = std::sqrt(acc_h);
        cm.grad_nm_dist = std::sqrt(acc_g);
        result.cross_m.push_back(cm);
    }

    auto add_slope = [&](const std::string& name, const std::vector<std::pair<double, double>>& pts) {
        MetricSlope ms{name, std::nullopt};
        const bool positive = std::all_of(pts.begin(), pts.end(),
                                          [](const auto& p) { return p.first > 0.0 && p.second > 0.0; });
        if (pts.size() >= 3 && positive) ms.fit = fit_slope(pts);
        result.slopes.push_back(ms);
    };
    auto per_m_points = [&](double PerMMetrics::*field) {
        std::vector<std::pair<double, double>> pts;
        for (const PerMMetrics& p : result.per_m)
            if (p.ok) pts.emplace_back(p.m, p.*field);
        return pts;
    };
    auto cross_points = [&](double CrossMMetrics::*field) {
        std::vector<std::pair<double, double>> pts;
        for (const CrossMMetrics& c : result.cross_m) pts.emplace_back(c.m_lo, c.*field);
        return pts;
    };
    add_slope("overshoot_st", per_m_points(&PerMMetrics::overshoot_st));
    add_slope("graph_P_st", per_m_points(&PerMMetrics::graph_P_st));
    add_slope("graph_gradP_st", per_m_points(&PerMMetrics::graph_gradP_st));
    add_slope("compl_st", per_m_points(&PerMMetrics::compl_st));
    add_slope("grad_nm_st", per_m_points(&PerMMetrics::grad_nm_st));
    add_slope("hminus1_dist", cross_points(&CrossMMetrics::hminus1_dist));
    add_slope("grad_nm_dist", cross_points(&CrossMMetrics::grad_nm_dist));
    return result;
}

// ---------------------------------------------------------------------------

Barenblatt Barenblatt::with_mass(double m, double mass) {
    if (!(m > 1.0)) throw InvalidArgument("Barenblatt: m must be > 1");
    if (!(mass > 0.0)) throw InvalidArgument("Barenblatt: mass must be > 0");
    Barenblatt b;
    b.m = m;
    // mass = (pi / k) (m-1)/m C^{m/(m-1)}
    const double base = mass * b.k() * m / (std::numbers::pi * (m - 1.0));
    b.C = std::pow(base, (m - 1.0) / m);
    return b;
}

double Barenblatt::mass() const noexcept {
    return std::numbers::pi / k() * (m - 1.0) / m * std::pow(C, m / (m - 1.0));
}

double Barenblatt::support_radius(double t) const noexcept {
    return std::sqrt(C / k()) * std::pow(t, beta());
}

double Barenblatt::value(double r2, double t) const noexcept {
    const double core = C - k() * r2 * std::pow(t, -2.0 * beta());
    if (core <= 0.0) return 0.0;
    return std::pow(t, -alpha()) * std::pow(core, 1.0 / (m - 1.0));
}

ScalarField Barenblatt::sample(const Grid2D& grid, double t) const {
    ScalarField out(grid);
    for (int j = 0; j < grid.n(); ++j)
        for (int i = 0; i < grid.n(); ++i) out.at(i, j) = value(squared_radius_from_center(grid, i, j), t);
    return out;
}

BarenblattReport barenblatt_validate(double m, const Grid2D& grid, double t0, double t1,
                                     double mass, double dt_safety) {
    if (m != 2.0 && m != 3.0) throw InvalidArgument("barenblatt_validate: m must be 2 or 3");
    if (!(t0 > 0.0) || !(t1 >= t0)) throw InvalidArgument("barenblatt_validate: need 0 < t0 <= t1");
    const Barenblatt profile = Barenblatt::with_mass(m, mass);
    const double limit = 0.5 * grid.length() - grid.length() / 8.0;
    if (profile.support_radius(t1) > limit) {
        std::ostringstream msg;
        msg << "barenblatt_validate: support radius " << profile.support_radius(t1)
            << " at t1 exceeds " << limit;
        throw SupportEscape(msg.str());
    }

    SimParams params;
    params.grid = grid;
    params.m = m;
    params.coeffs.chi_0 = 0.0;
    params.dt_safety = dt_safety;
    params.t_end = t1 - t0;
    params.snapshot_every = 1 << 30;

    InitialData data(grid);
    data.n0 = profile.sample(grid, t0);

    BarenblattReport report;
    report.n_cells = grid.n();
    report.exact_mass = profile.mass();
    report.initial_mass = integrate(data.n0);

    Solver solver(params);
    RunOptions ro;
    ro.skip_validation = true;
    const RunResult run = solver.run(data, nullptr, ro);
    report.steps = run.steps;
    const ScalarField exact = profile.sample(grid, t1);
    const ScalarField err = run.final_state.n - exact;
    report.l1_error = lp_norm(err, 1.0);
    report.linf_error = lp_norm(err, INFINITY);
    report.final_mass = integrate(run.final_state.n);
    return report;
}

BarenblattRefinement barenblatt_refinement(double m, int n_coarse, double length, double t0,
                                           double t1, double mass, double dt_safety) {
    BarenblattRefinement r;
    r.coarse = barenblatt_validate(m, Grid2D(n_coarse, length), t0, t1, mass, dt_safety);
    r.fine = barenblatt_validate(m, Grid2D(2 * n_coarse, length), t0, t1, mass, dt_safety);
    r.ratio = r.fine.l1_error > 0.0 ? r.coarse.l1_error / r.fine.l1_error : 0.0;
    return r;
}

} // namespace hsl
