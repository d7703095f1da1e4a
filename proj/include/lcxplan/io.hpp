#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lcxplan/cable.hpp"
#include "lcxplan/calibration.hpp"
#include "lcxplan/engines.hpp"
#include "lcxplan/environment.hpp"
#include "lcxplan/errors.hpp"

namespace lcxplan {

// All input and output documents are line-oriented text with a versioned
// header line, `#` comments and fixed column orders. dBm levels are
// serialized at 2 decimals; that quantization is part of the format.

CableSpec parse_cable_spec(const std::filesystem::path& file);
CableLayout parse_layout(const std::filesystem::path& file);
Environment parse_environment(const std::filesystem::path& file);
MeasurementSet parse_measurements(const std::filesystem::path& file,
                                  const CableLayout& layout);
CoverageMap parse_coverage_grid(const std::filesystem::path& file);

std::string serialize_cable_spec(const CableSpec& spec);

/// Heatmap rendering window: dBm levels mapped linearly onto 0..255.
struct HeatmapWindow {
    double floor_dbm = -120.0;
    double ceil_dbm = -20.0;
};

/// Writes `<base>.grid` (delimiter-separated dBm values), `<base>.pgm`
/// (plain-text graymap) and `<base>.manifest` (parameter digest); tolerance
/// band grids get `_best`/`_worst` suffixes. Returns the written paths.
/// Re-emitting the same map produces byte-identical files.
std::vector<std::filesystem::path> emit_coverage(const CoverageMap& map,
                                                 const std::filesystem::path& dir,
                                                 const std::string& base,
                                                 HeatmapWindow window = {});

std::string serialize_error_table(const ErrorTable& table);
std::string serialize_rssi_table(const RssiTable& table, bool with_verdict);

/// Preset service frequencies covered by the planning tool (GHz):
/// broadcast/TMC 0.1, DAB+ 0.2, 2G 0.9, 4G 1.8, Wi-Fi 2.4, 5G 3.6,
/// ITS-G5 5.9.
const std::vector<double>& preset_frequencies_ghz();

/// FNV-1a, used to fingerprint input files in run manifests.
std::uint64_t fnv1a64(const std::string& bytes);

/// Writes the whole file or removes it; partial files never survive.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// Run manifest: records the command, its arguments (minus the output
/// directory) and input-file fingerprints, so a run can be replayed
/// byte-identically.
struct RunManifest {
    std::string command;
    std::vector<std::string> args;
    std::vector<std::pair<std::string, std::string>> inputs; // role, path
    std::vector<std::string> outputs;                        // relative names
};

std::string serialize_run_manifest(const RunManifest& manifest);
RunManifest parse_run_manifest(const std::filesystem::path& file);

/// Formats a dBm level at the 2-decimal contract (negative zero folded).
std::string format_dbm(double v);

} // namespace lcxplan
