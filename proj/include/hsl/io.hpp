#pragma once

#include "hsl/diagnostics.hpp"
#include "hsl/limit_lab.hpp"
#include "hsl/model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hsl {

/// Everything a run or sweep needs. Every field has a default.
struct Config {
    SimParams params{};
    PatchSpec patch{};
    std::string out_dir = "out";
    std::vector<double> m_list{5.0, 8.0, 12.0, 18.0, 27.0, 40.0};
    double snapshot_dt = 0.0;   // 0 picks t_end / 20
    bool deterministic = true;
    int workers = 1;
    int frame_every = 1;        // write PGM frames every k-th record
    bool validate_data = true;

    bool operator==(const Config&) const = default;
};

/// Flat `key = value` lines, `#` comments, `[section]` headers ignored.
/// Throws UnknownKey / BadValue carrying the 1-based line number.
Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

/// Emits every key, so parse_config(serialize(c)) == c.
std::string serialize(const Config& config);

inline constexpr int kDiagCsvVersion = 1;

/// `# heleshaw diag v1` comment line, the header, then one row per record
/// with %.17g values and LF line endings.
void write_diag_csv(const std::vector<DiagRecord>& records, const std::filesystem::path& path);
std::vector<DiagRecord> read_diag_csv(const std::filesystem::path& path);

/// Binary PGM (P5), row y = 0 first. Pixel = clamp(floor(255 (f-lo)/(hi-lo) + 1/2), 0, 255).
void write_heatmap(const ScalarField& f, const std::filesystem::path& path, double lo, double hi);
std::vector<std::uint8_t> heatmap_pixels(const ScalarField& f, double lo, double hi);

/// One row per m, then the cross-m block.
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path);
void write_slopes(const SweepResult& result, const std::filesystem::path& path);
std::string format_slopes(const SweepResult& result);

} // namespace hsl
