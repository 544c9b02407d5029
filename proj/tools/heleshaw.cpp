// heleshaw: run, sweep, validate and selftest entry points.

#include "hsl/checks.hpp"
#include "hsl/diagnostics.hpp"
#include "hsl/errors.hpp"
#include "hsl/io.hpp"
#include "hsl/limit_lab.hpp"
#include "hsl/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>

namespace fs = std::filesystem;
using namespace hsl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

int env_workers(int fallback) {
    const char* env = std::getenv("HELESHAW_WORKERS");
    if (!env || !*env) return fallback;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw InvalidArgument(std::string("HELESHAW_WORKERS: bad value '") + env + "'");
    return static_cast<int>(v);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

class FrameWriter : public RunObserver {
public:
    FrameWriter(fs::path dir, const SimParams& params, int every)
        : dir_(std::move(dir)), m_(params.m), every_(every) {}

    void on_record(const DiagRecord& rec, const State& state) override {
        records.push_back(rec);
        if (every_ > 0 && index_ % every_ == 0) {
            char name[32];
            std::snprintf(name, sizeof name, "%05d.pgm", frame_);
            const ScalarField P = compute_pressure(state.n, m_);
            write_heatmap(state.n, dir_ / (std::string("n_") + name), 0.0, 1.0);
            write_heatmap(P, dir_ / (std::string("P_") + name), 0.0, std::max(1.0, max_value(P)));
            ++frame_;
        }
        ++index_;
    }

    std::vector<DiagRecord> records;

private:
    fs::path dir_;
    double m_;
    int every_;
    int index_ = 0;
    int frame_ = 0;
};

int cmd_run(const std::string& config_path, const std::string& out_opt) {
    Config cfg = load_config(config_path);
    const fs::path out = out_opt.empty() ? fs::path(cfg.out_dir) : fs::path(out_opt);
    ensure_dir(out);
    const InitialData data = make_initial_patch(cfg.params, cfg.patch);
    Solver solver(cfg.params);
    FrameWriter frames(out, cfg.params, cfg.frame_every);
    RunOptions ro;
    ro.skip_validation = !cfg.validate_data;
    const RunResult result = solver.run(data, &frames, ro);
    write_diag_csv(frames.records, out / "diag.csv");
    std::cout << "steps " << result.steps << ", records " << frames.records.size() << ", max |div u| "
              << result.max_projection_residual << ", boundary mass " << boundary_mass(result.final_state.n)
              << "\nwrote " << (out / "diag.csv").string() << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_opt) {
    Config cfg = load_config(config_path);
    const fs::path out = out_opt.empty() ? fs::path(cfg.out_dir) : fs::path(out_opt);
    ensure_dir(out);
    const InitialData data = make_initial_patch(cfg.params, cfg.patch);
    SweepOptions so;
    so.snapshot_dt = cfg.snapshot_dt;
    so.workers = env_workers(cfg.workers);
    so.skip_validation = !cfg.validate_data;
    const SweepResult result = sweep(cfg.params, data, cfg.m_list, so);
    write_sweep_csv(result, out / "sweep.csv");
    write_slopes(result, out / "slopes.txt");
    std::cout << format_slopes(result);
    for (const PerMMetrics& p : result.per_m)
        if (!p.ok) std::cerr << "m = " << p.m << " failed: " << p.error << "\n";
    return result.partial ? kExitFail : kExitOk;
}

int cmd_validate(const std::string& which) {
    bool ok = true;
    if (which == "all" || which == "barenblatt") {
        const BarenblattRefinement r = barenblatt_refinement(2.0, 64, 2.0 * std::numbers::pi, 1.0, 2.0, 1.0);
        const bool pass = r.ratio >= 1.4 && r.ratio <= 2.6 && r.fine.l1_error <= 0.02 * r.fine.exact_mass;
        std::cout << "barenblatt m=2: L1 error N=64 " << r.coarse.l1_error << ", N=128 " << r.fine.l1_error
                  << ", refinement ratio " << r.ratio << (pass ? "  PASS" : "  FAIL") << "\n";
        ok = ok && pass;
    }
    if (which == "all" || which == "taylor-green") {
        const TaylorGreenReport tg = taylor_green_decay(64, 2.0 * std::numbers::pi, 0.1, 1.0);
        const bool pass = tg.rel_error <= 1e-3;
        std::cout << "taylor-green N=64 T=0.1: kinetic energy " << tg.ke_final << " vs " << tg.ke_expected
                  << ", rel error " << tg.rel_error << (pass ? "  PASS" : "  FAIL") << "\n";
        ok = ok && pass;
    }
    if (which == "all" || which == "ode") {
        const OxygenOdeReport ode = oxygen_ode(64, 0.2, 0.8, 100, ConsumptionKind::Saturating);
        const bool pass = ode.rel_error <= 1e-6;
        std::cout << "oxygen ode 100 steps: c " << ode.c_final << " vs " << ode.c_reference << ", rel error "
                  << ode.rel_error << (pass ? "  PASS" : "  FAIL") << "\n";
        ok = ok && pass;
    }
    return ok ? kExitOk : kExitFail;
}

int cmd_selftest() {
    bool ok = true;
    for (const CheckResult& c : run_selftest()) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << "\n";
        ok = ok && c.passed;
    }
    return ok ? kExitOk : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hele-Shaw limit laboratory for the chemotaxis-fluid porous-medium system"};
    app.require_subcommand(1);

    std::string config_path, out_dir, which = "all";
    auto* run = app.add_subcommand("run", "single simulation; writes diag.csv and PGM frames");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory (default: out_dir from the config)");

    auto* sw = app.add_subcommand("sweep", "m-ladder study; writes sweep.csv and slopes.txt");
    sw->add_option("--config", config_path, "config file")->required();
    sw->add_option("--out", out_dir, "output directory (default: out_dir from the config)");

    auto* val = app.add_subcommand("validate", "oracle suites");
    val->add_option("--case", which, "barenblatt | taylor-green | ode | all")
        ->check(CLI::IsMember({"all", "barenblatt", "taylor-green", "ode"}));

    auto* self = app.add_subcommand("selftest", "operator and invariant checks on small grids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, out_dir);
        if (*sw) return cmd_sweep(config_path, out_dir);
        if (*val) return cmd_validate(which);
        if (*self) return cmd_selftest();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PatchTooLarge& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationFailed& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitConfig;
}
