#include "hsl/io.hpp"

#include "hsl/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace hsl {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_int(const std::string& s, long& out) {
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

// Key table: a parser that writes into the working config and a printer
// that reads it back out.
struct Working {
    Config cfg;
    long n = 64;
    double length = 6.283185307179586;
};

struct KeySpec {
    std::function<void(Working&, const std::string&, int)> set;
    std::function<std::string(const Working&)> get;
};

[[noreturn]] void bad(const std::string& key, const std::string& value, int line, const std::string& why) {
    throw BadValue("line " + std::to_string(line) + ": bad value '" + value + "' for " + key + " (" + why + ")",
                   line);
}

template <class Get, class Set>
KeySpec make_real(std::string key, Get get, Set set, std::function<bool(double)> ok, std::string why) {
    return {[=](Working& w, const std::string& v, int line) {
                double x = 0.0;
                if (!parse_double(v, x)) bad(key, v, line, "not a finite number");
                if (!ok(x)) bad(key, v, line, why);
                set(w, x);
            },
            [=](const Working& w) { return fmt17(get(w)); }};
}

template <class Get, class Set>
KeySpec make_int(std::string key, Get get, Set set, long lo, std::string why) {
    return {[=](Working& w, const std::string& v, int line) {
                long x = 0;
                if (!parse_int(v, x)) bad(key, v, line, "not an integer");
                if (x < lo || x > 1'000'000'000L) bad(key, v, line, why);
                set(w, x);
            },
            [=](const Working& w) { return std::to_string(get(w)); }};
}

template <class E>
KeySpec make_enum(std::string key, std::vector<std::pair<std::string, E>> names,
                  std::function<E&(Working&)> ref) {
    return {[=](Working& w, const std::string& v, int line) {
                for (const auto& [name, e] : names) {
                    if (name == v) {
                        ref(w) = e;
                        return;
                    }
                }
                std::string allowed;
                for (const auto& [name, e] : names) allowed += (allowed.empty() ? "" : "|") + name;
                bad(key, v, line, "expected " + allowed);
            },
            [=](const Working& w) {
                const E e = ref(const_cast<Working&>(w));
                for (const auto& [name, x] : names)
                    if (x == e) return name;
                return std::string("?");
            }};
}

KeySpec make_bool(std::string key, std::function<bool&(Working&)> ref) {
    return {[=](Working& w, const std::string& v, int line) {
                if (v == "true" || v == "1" || v == "yes") ref(w) = true;
                else if (v == "false" || v == "0" || v == "no") ref(w) = false;
                else bad(key, v, line, "expected true|false");
            },
            [=](const Working& w) { return std::string(ref(const_cast<Working&>(w)) ? "true" : "false"); }};
}

KeySpec make_string(std::function<std::string&(Working&)> ref) {
    return {[=](Working& w, const std::string& v, int) { ref(w) = v; },
            [=](const Working& w) { return ref(const_cast<Working&>(w)); }};
}

KeySpec make_m_list() {
    return {[](Working& w, const std::string& v, int line) {
                std::vector<double> out;
                std::stringstream ss(v);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    double x = 0.0;
                    const std::string t = trim(item);
                    if (!parse_double(t, x)) bad("m_list", v, line, "not a comma-separated list of numbers");
                    if (x < kLimitMinExponent) bad("m_list", v, line, "every exponent must be >= 5");
                    out.push_back(x);
                }
                if (out.empty()) bad("m_list", v, line, "empty list");
                std::vector<double> sorted = out;
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                    bad("m_list", v, line, "duplicate exponent");
                }
                w.cfg.m_list = std::move(out);
            },
            [](const Working& w) {
                std::string s;
                for (double m : w.cfg.m_list) s += (s.empty() ? "" : ", ") + fmt17(m);
                return s;
            }};
}

const std::vector<std::pair<std::string, KeySpec>>& key_table() {
    using W = Working;
    auto positive = [](double x) { return x > 0.0; };
    auto nonneg = [](double x) { return x >= 0.0; };
    auto any = [](double) { return true; };
    static const std::vector<std::pair<std::string, KeySpec>> table = {
        {"N", make_int("N", [](const W& w) { return w.n; }, [](W& w, long x) { w.n = x; }, 8, "must be >= 8")},
        {"L", make_real("L", [](const W& w) { return w.length; }, [](W& w, double x) { w.length = x; }, positive,
                        "must be > 0")},
        {"m", make_real("m", [](const W& w) { return w.cfg.params.m; }, [](W& w, double x) { w.cfg.params.m = x; },
                        [](double x) { return x >= 3.0; }, "must be >= 3")},
        {"eps_visc", make_real("eps_visc", [](const W& w) { return w.cfg.params.eps_visc; },
                               [](W& w, double x) { w.cfg.params.eps_visc = x; }, nonneg, "must be >= 0")},
        {"eps_mollify", make_real("eps_mollify", [](const W& w) { return w.cfg.params.eps_mollify; },
                                  [](W& w, double x) { w.cfg.params.eps_mollify = x; }, nonneg, "must be >= 0")},
        {"chi", make_enum<ChiKind>("chi", {{"constant", ChiKind::Constant}, {"saturating", ChiKind::Saturating}},
                                   [](W& w) -> ChiKind& { return w.cfg.params.coeffs.chi_kind; })},
        {"chi_0", make_real("chi_0", [](const W& w) { return w.cfg.params.coeffs.chi_0; },
                            [](W& w, double x) { w.cfg.params.coeffs.chi_0 = x; }, any, "")},
        {"f", make_enum<ConsumptionKind>(
                  "f", {{"saturating", ConsumptionKind::Saturating}, {"linear-capped", ConsumptionKind::LinearCapped}},
                  [](W& w) -> ConsumptionKind& { return w.cfg.params.coeffs.f_kind; })},
        {"phi", make_enum<PotentialKind>("phi", {{"zero", PotentialKind::Zero}, {"gravity", PotentialKind::Gravity}},
                                         [](W& w) -> PotentialKind& { return w.cfg.params.coeffs.phi_kind; })},
        {"phi_amp", make_real("phi_amp", [](const W& w) { return w.cfg.params.coeffs.phi_amp; },
                              [](W& w, double x) { w.cfg.params.coeffs.phi_amp = x; }, any, "")},
        {"c_B", make_real("c_B", [](const W& w) { return w.cfg.params.coeffs.c_bound; },
                          [](W& w, double x) { w.cfg.params.coeffs.c_bound = x; }, positive, "must be > 0")},
        {"dt_safety", make_real("dt_safety", [](const W& w) { return w.cfg.params.dt_safety; },
                                [](W& w, double x) { w.cfg.params.dt_safety = x; },
                                [](double x) { return x > 0.0 && x <= 1.0; }, "must lie in (0, 1]")},
        {"t_end", make_real("t_end", [](const W& w) { return w.cfg.params.t_end; },
                            [](W& w, double x) { w.cfg.params.t_end = x; }, nonneg, "must be >= 0")},
        {"snapshot_every", make_int("snapshot_every", [](const W& w) { return long(w.cfg.params.snapshot_every); },
                                    [](W& w, long x) { w.cfg.params.snapshot_every = int(x); }, 1, "must be >= 1")},
        {"C0", make_real("C0", [](const W& w) { return w.cfg.params.C0; }, [](W& w, double x) { w.cfg.params.C0 = x; },
                         positive, "must be > 0")},
        {"compl_threshold_rel",
         make_real("compl_threshold_rel", [](const W& w) { return w.cfg.params.compl_threshold_rel; },
                   [](W& w, double x) { w.cfg.params.compl_threshold_rel = x; }, nonneg, "must be >= 0")},
        {"patch_x", make_real("patch_x", [](const W& w) { return w.cfg.patch.center_x; },
                              [](W& w, double x) { w.cfg.patch.center_x = x; }, any, "")},
        {"patch_y", make_real("patch_y", [](const W& w) { return w.cfg.patch.center_y; },
                              [](W& w, double x) { w.cfg.patch.center_y = x; }, any, "")},
        {"patch_radius", make_real("patch_radius", [](const W& w) { return w.cfg.patch.radius; },
                                   [](W& w, double x) { w.cfg.patch.radius = x; }, positive, "must be > 0")},
        {"n_amp", make_real("n_amp", [](const W& w) { return w.cfg.patch.n_amp; },
                            [](W& w, double x) { w.cfg.patch.n_amp = x; },
                            [](double x) { return x >= 0.0 && x <= 1.0; }, "must lie in [0, 1]")},
        {"c_profile", make_enum<OxygenProfile>("c_profile",
                                               {{"disc", OxygenProfile::Disc}, {"constant", OxygenProfile::Constant}},
                                               [](W& w) -> OxygenProfile& { return w.cfg.patch.c_profile; })},
        {"c_amp", make_real("c_amp", [](const W& w) { return w.cfg.patch.c_amp; },
                            [](W& w, double x) { w.cfg.patch.c_amp = x; }, nonneg, "must be >= 0")},
        {"c_radius", make_real("c_radius", [](const W& w) { return w.cfg.patch.c_radius; },
                               [](W& w, double x) { w.cfg.patch.c_radius = x; }, positive, "must be > 0")},
        {"mollify_width", make_real("mollify_width", [](const W& w) { return w.cfg.patch.mollify_width; },
                                    [](W& w, double x) { w.cfg.patch.mollify_width = x; }, nonneg, "must be >= 0")},
        {"u_profile",
         make_enum<VelocityProfile>("u_profile",
                                    {{"zero", VelocityProfile::Zero}, {"taylor-green", VelocityProfile::TaylorGreen}},
                                    [](W& w) -> VelocityProfile& { return w.cfg.patch.u_profile; })},
        {"u_amp", make_real("u_amp", [](const W& w) { return w.cfg.patch.u_amp; },
                            [](W& w, double x) { w.cfg.patch.u_amp = x; }, any, "")},
        {"out_dir", make_string([](W& w) -> std::string& { return w.cfg.out_dir; })},
        {"m_list", make_m_list()},
        {"snapshot_dt", make_real("snapshot_dt", [](const W& w) { return w.cfg.snapshot_dt; },
                                  [](W& w, double x) { w.cfg.snapshot_dt = x; }, nonneg, "must be >= 0")},
        {"deterministic", make_bool("deterministic", [](W& w) -> bool& { return w.cfg.deterministic; })},
        {"workers", make_int("workers", [](const W& w) { return long(w.cfg.workers); },
                             [](W& w, long x) { w.cfg.workers = int(x); }, 1, "must be >= 1")},
        {"frame_every", make_int("frame_every", [](const W& w) { return long(w.cfg.frame_every); },
                                 [](W& w, long x) { w.cfg.frame_every = int(x); }, 0, "must be >= 0")},
        {"validate_data", make_bool("validate_data", [](W& w) -> bool& { return w.cfg.validate_data; })},
    };
    return table;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace

Config parse_config(const std::string& text) {
    const auto& table = key_table();
    Working w;
    w.n = w.cfg.params.grid.n();
    w.length = w.cfg.params.grid.length();

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw BadValue("line " + std::to_string(line_no) + ": malformed section header", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw BadValue("line " + std::to_string(line_no) + ": expected key = value", line_no);
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
        if (it == table.end()) {
            throw UnknownKey("line " + std::to_string(line_no) + ": unknown key '" + key + "'", line_no);
        }
        it->second.set(w, value, line_no);
    }
    w.cfg.params.grid = Grid2D(static_cast<int>(w.n), w.length);
    return w.cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const Config& config) {
    Working w;
    w.cfg = config;
    w.n = config.params.grid.n();
    w.length = config.params.grid.length();
    std::string out;
    for (const auto& [key, spec] : key_table()) out += key + " = " + spec.get(w) + "\n";
    return out;
}

// ---------------------------------------------------------------------------

void write_diag_csv(const std::vector<DiagRecord>& records, const std::filesystem::path& path) {
    std::string text = "# heleshaw diag v" + std::to_string(kDiagCsvVersion) + "\n";
    for (std::size_t k = 0; k < DiagRecord::kColumnCount; ++k) {
        if (k) text += ',';
        text += DiagRecord::kColumns[k];
    }
    text += '\n';
    for (const DiagRecord& r : records) {
        const auto values = r.as_array();
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (k) text += ',';
            text += fmt17(values[k]);
        }
        text += '\n';
    }
    write_text(path, text);
}

std::vector<DiagRecord> read_diag_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<DiagRecord> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::array<double, DiagRecord::kColumnCount> values{};
        std::stringstream ss(line);
        std::string cell;
        std::size_t k = 0;
        while (std::getline(ss, cell, ',')) {
            if (k >= values.size()) throw IoError(path.string() + ": too many columns");
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), values[k]);
            if (ec != std::errc() || ptr != cell.data() + cell.size()) {
                throw IoError(path.string() + ": bad number '" + cell + "'");
            }
            ++k;
        }
        if (k != values.size()) throw IoError(path.string() + ": wrong column count");
        out.push_back(DiagRecord::from_array(values));
    }
    return out;
}

std::vector<std::uint8_t> heatmap_pixels(const ScalarField& f, double lo, double hi) {
    if (!(lo < hi)) throw InvalidArgument("heatmap: need lo < hi");
    std::vector<std::uint8_t> px(f.size());
    const double scale = 255.0 / (hi - lo);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double v = std::floor(scale * (f[k] - lo) + 0.5);
        px[k] = static_cast<std::uint8_t>(std::clamp(std::isnan(v) ? 0.0 : v, 0.0, 255.0));
    }
    return px;
}

void write_heatmap(const ScalarField& f, const std::filesystem::path& path, double lo, double hi) {
    const std::vector<std::uint8_t> px = heatmap_pixels(f, lo, hi);
    const int n = f.grid().n();
    std::string text = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    text.append(reinterpret_cast<const char*>(px.data()), px.size());
    write_text(path, text);
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
    std::string text = "# heleshaw sweep v1\n";
    text += "m,ok,steps,overshoot_st,graph_P_st,graph_gradP_st,compl_st,grad_nm_st,snapshot_mismatch,error\n";
    for (const PerMMetrics& p : result.per_m) {
        std::string err = p.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        text += fmt17(p.m) + ',' + (p.ok ? "1" : "0") + ',' + std::to_string(p.steps) + ',' + fmt17(p.overshoot_st) +
                ',' + fmt17(p.graph_P_st) + ',' + fmt17(p.graph_gradP_st) + ',' + fmt17(p.compl_st) + ',' +
                fmt17(p.grad_nm_st) + ',' + fmt17(p.snapshot_mismatch) + ',' + err + '\n';
    }
    text += "\nm_lo,m_hi,hminus1_dist,grad_nm_dist\n";
    for (const CrossMMetrics& c : result.cross_m) {
        text += fmt17(c.m_lo) + ',' + fmt17(c.m_hi) + ',' + fmt17(c.hminus1_dist) + ',' + fmt17(c.grad_nm_dist) + '\n';
    }
    write_text(path, text);
}

std::string format_slopes(const SweepResult& result) {
    std::ostringstream out;
    out << "log-log slopes against m (snapshot spacing " << fmt17(result.snapshot_dt) << ")\n";
    if (result.partial) out << "partial: at least one exponent failed\n";
    for (const MetricSlope& s : result.slopes) {
        out << s.metric << ": ";
        if (s.fit) {
            out << "slope " << fmt17(s.fit->slope) << " intercept " << fmt17(s.fit->intercept) << " r2 "
                << fmt17(s.fit->r2) << '\n';
        } else {
            out << "absent\n";
        }
    }
    return out.str();
}

void write_slopes(const SweepResult& result, const std::filesystem::path& path) {
    write_text(path, format_slopes(result));
}

} // namespace hsl
