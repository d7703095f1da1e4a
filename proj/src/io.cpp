#include "lcxplan/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lcxplan {

namespace {

struct Line {
    std::size_t number = 0;
    std::string text;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& s) {
    const auto hash = s.find('#');
    return hash == std::string::npos ? s : s.substr(0, hash);
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string token;
    while (in >> token)
        out.push_back(token);
    return out;
}

double to_double(const std::string& token, const std::string& file, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || token.empty() || errno == ERANGE)
        throw ParseError(file, line, "expected a number, got '" + token + "'");
    return v;
}

/// Content lines of a document; the first line must be `<schema> v1`.
std::vector<Line> read_document(const std::filesystem::path& path, const std::string& schema) {
    const std::string file = path.string();
    std::ifstream in(path);
    if (!in)
        throw ParseError(file, 0, "cannot open file");

    std::vector<Line> lines;
    std::string raw;
    std::size_t number = 0;
    bool saw_header = false;
    while (std::getline(in, raw)) {
        ++number;
        if (!saw_header) {
            const std::string header = trim(raw);
            const auto tokens = split(header);
            if (tokens.size() != 2 || tokens[0] != schema)
                throw ParseError(file, number, "expected header '" + schema + " v1'");
            if (tokens[1] != "v1")
                throw ParseError(file, number, "unknown " + schema + " version '" + tokens[1] + "'");
            saw_header = true;
            continue;
        }
        const std::string content = trim(strip_comment(raw));
        if (content.empty())
            continue;
        lines.push_back({number, content});
    }
    if (!saw_header)
        throw ParseError(file, 0, "empty file, expected header '" + schema + " v1'");
    return lines;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string fmt_num(double v) { return fmt("%.12g", v); }

Engine engine_from_string(const std::string& s, const std::string& file, std::size_t line) {
    if (s == "spl")
        return Engine::spl;
    if (s == "dominant_path")
        return Engine::dominant_path;
    if (s == "coherent")
        return Engine::coherent;
    throw ParseError(file, line, "unknown engine '" + s + "'");
}

Quantile quantile_from_string(const std::string& s, const std::string& file, std::size_t line) {
    if (s == "lc50")
        return Quantile::lc50;
    if (s == "lc95")
        return Quantile::lc95;
    throw ParseError(file, line, "unknown quantile '" + s + "'");
}

} // namespace

std::string format_dbm(double v) {
    std::string s = fmt("%.2f", v);
    return s == "-0.00" ? "0.00" : s;
}

CableSpec parse_cable_spec(const std::filesystem::path& path) {
    const std::string file = path.string();
    CableSpec spec;
    bool have_name = false;
    for (const Line& line : read_document(path, "lcx-cable-spec")) {
        const auto tokens = split(line.text);
        const std::string& key = tokens[0];
        if (key == "name") {
            if (tokens.size() < 2)
                throw ParseError(file, line.number, "name requires a value");
            spec.name = trim(line.text.substr(4));
            have_name = true;
        } else if (key == "mode") {
            if (tokens.size() != 2 || (tokens[1] != "radiating" && tokens[1] != "coupled"))
                throw ParseError(file, line.number, "mode must be 'radiating' or 'coupled'");
            spec.mode = tokens[1];
        } else if (key == "lc_tolerance_db") {
            if (tokens.size() != 2)
                throw ParseError(file, line.number, "lc_tolerance_db requires one value");
            spec.lc_tolerance = LossDb(to_double(tokens[1], file, line.number));
        } else if (key == "reference_lateral_distance_m") {
            if (tokens.size() != 2)
                throw ParseError(file, line.number, "reference_lateral_distance_m requires one value");
            spec.reference_lateral_distance_m = to_double(tokens[1], file, line.number);
        } else if (key == "row") {
            if (tokens.size() != 5)
                throw ParseError(file, line.number,
                                 "row requires: frequency_ghz alpha_db_per_m lc50_db lc95_db");
            CableParamRow row;
            row.frequency_hz = to_double(tokens[1], file, line.number) * 1e9;
            row.alpha_db_per_m = to_double(tokens[2], file, line.number);
            const double lc50 = to_double(tokens[3], file, line.number);
            const double lc95 = to_double(tokens[4], file, line.number);
            if (row.frequency_hz <= 0.0)
                throw ParseError(file, line.number, "row frequency must be > 0");
            if (row.alpha_db_per_m < 0.0)
                throw ParseError(file, line.number, "alpha >= 0");
            if (lc95 < lc50)
                throw ParseError(file, line.number, "lc95 >= lc50");
            if (!spec.rows.empty() && row.frequency_hz <= spec.rows.back().frequency_hz)
                throw ParseError(file, line.number,
                                 "rows sorted by strictly increasing frequency");
            row.lc50 = LossDb(lc50);
            row.lc95 = LossDb(lc95);
            spec.rows.push_back(row);
        } else {
            throw ParseError(file, line.number, "unknown directive '" + key + "'");
        }
    }
    if (!have_name)
        throw ParseError(file, 0, "missing 'name'");
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ParseError(file, 0, e.what());
    }
    return spec;
}

std::string serialize_cable_spec(const CableSpec& spec) {
    std::string out = "lcx-cable-spec v1\n";
    out += "name " + spec.name + "\n";
    out += "mode " + spec.mode + "\n";
    out += "lc_tolerance_db " + fmt_num(spec.lc_tolerance.value) + "\n";
    out += "reference_lateral_distance_m " + fmt_num(spec.reference_lateral_distance_m) + "\n";
    for (const CableParamRow& row : spec.rows) {
        out += "row " + fmt("%.9g", row.frequency_hz * 1e-9) + " " +
               fmt("%.6g", row.alpha_db_per_m) + " " + fmt("%.4f", row.lc50.value) + " " +
               fmt("%.4f", row.lc95.value) + "\n";
    }
    return out;
}

CableLayout parse_layout(const std::filesystem::path& path) {
    const std::string file = path.string();
    CableLayout layout;
    bool feed_at_end = false;
    for (const Line& line : read_document(path, "lcx-cable-layout")) {
        const auto tokens = split(line.text);
        const std::string& key = tokens[0];
        if (key == "vertex") {
            if (tokens.size() != 3)
                throw ParseError(file, line.number, "vertex requires: x y");
            const Point p{to_double(tokens[1], file, line.number),
                          to_double(tokens[2], file, line.number)};
            if (!layout.path.empty() && distance(layout.path.back(), p) == 0.0)
                throw ParseError(file, line.number, "consecutive path vertices must be distinct");
            layout.path.push_back(p);
        } else if (key == "feed_end") {
            if (tokens.size() != 2 || (tokens[1] != "start" && tokens[1] != "end"))
                throw ParseError(file, line.number, "feed_end must be 'start' or 'end'");
            feed_at_end = tokens[1] == "end";
        } else if (key == "mount_height_m") {
            if (tokens.size() != 2)
                throw ParseError(file, line.number, "mount_height_m requires one value");
            layout.mount_height_m = to_double(tokens[1], file, line.number);
        } else if (key == "termination") {
            if (tokens.size() != 2 || tokens[1] != "matched_load")
                throw ParseError(file, line.number, "termination must be 'matched_load'");
        } else {
            throw ParseError(file, line.number, "unknown directive '" + key + "'");
        }
    }
    if (feed_at_end)
        std::reverse(layout.path.begin(), layout.path.end());
    try {
        layout.validate();
    } catch (const std::exception& e) {
        throw ParseError(file, 0, e.what());
    }
    return layout;
}

Environment parse_environment(const std::filesystem::path& path) {
    const std::string file = path.string();
    Environment env;
    bool have_extent = false;
    for (const Line& line : read_document(path, "lcx-environment")) {
        const auto tokens = split(line.text);
        const std::string& key = tokens[0];
        if (key == "grid_origin") {
            if (tokens.size() != 3)
                throw ParseError(file, line.number, "grid_origin requires: x y");
            env.grid_origin = {to_double(tokens[1], file, line.number),
                               to_double(tokens[2], file, line.number)};
        } else if (key == "grid_extent") {
            if (tokens.size() != 3)
                throw ParseError(file, line.number, "grid_extent requires: width height");
            env.grid_width_m = to_double(tokens[1], file, line.number);
            env.grid_height_m = to_double(tokens[2], file, line.number);
            have_extent = true;
        } else if (key == "grid_resolution") {
            if (tokens.size() != 2)
                throw ParseError(file, line.number, "grid_resolution requires one value");
            env.grid_resolution_m = to_double(tokens[1], file, line.number);
        } else if (key == "receiver_height_m") {
            if (tokens.size() != 2)
                throw ParseError(file, line.number, "receiver_height_m requires one value");
            env.receiver_height_m = to_double(tokens[1], file, line.number);
        } else if (key == "barrier") {
            if (tokens.size() != 6)
                throw ParseError(file, line.number,
                                 "barrier requires: x1 y1 x2 y2 reflection_gain_db");
            BarrierSegment b;
            b.a = {to_double(tokens[1], file, line.number), to_double(tokens[2], file, line.number)};
            b.b = {to_double(tokens[3], file, line.number), to_double(tokens[4], file, line.number)};
            b.reflection_gain_db = to_double(tokens[5], file, line.number);
            env.barriers.push_back(b);
        } else if (key == "obstacle") {
            if (tokens.size() < 8 || (tokens.size() - 2) % 2 != 0)
                throw ParseError(file, line.number,
                                 "obstacle requires: penetration_loss_db x1 y1 x2 y2 x3 y3 ...");
            const double loss = to_double(tokens[1], file, line.number);
            if (loss < 0.0)
                throw ParseError(file, line.number, "penetration loss must be >= 0");
            std::vector<Point> vertices;
            for (std::size_t i = 2; i < tokens.size(); i += 2) {
                vertices.push_back({to_double(tokens[i], file, line.number),
                                    to_double(tokens[i + 1], file, line.number)});
            }
            try {
                env.obstacles.push_back({ConvexPolygon(std::move(vertices)), LossDb(loss)});
            } catch (const std::exception& e) {
                throw ParseError(file, line.number, e.what());
            }
        } else {
            throw ParseError(file, line.number, "unknown directive '" + key + "'");
        }
    }
    if (!have_extent)
        throw ParseError(file, 0, "missing 'grid_extent'");
    try {
        env.validate();
    } catch (const std::exception& e) {
        throw ParseError(file, 0, e.what());
    }
    return env;
}

MeasurementSet parse_measurements(const std::filesystem::path& path, const CableLayout& layout) {
    const std::string file = path.string();
    MeasurementSet set;
    set.layout = layout;
    set.source_id = path.filename().string();
    for (const Line& line : read_document(path, "lcx-measurements")) {
        const auto tokens = split(line.text);
        const std::string& key = tokens[0];
        if (key == "record") {
            if (tokens.size() < 5)
                throw ParseError(file, line.number,
                                 "record requires: d_lon d_lat frequency_ghz sample_dbm ...");
            MeasurementRecord rec;
            rec.d_lon_m = to_double(tokens[1], file, line.number);
            rec.d_lat_m = to_double(tokens[2], file, line.number);
            const double ghz = to_double(tokens[3], file, line.number);
            if (ghz <= 0.0)
                throw ParseError(file, line.number, "record frequency must be > 0");
            rec.frequency = Frequency::from_ghz(ghz);
            for (std::size_t i = 4; i < tokens.size(); ++i)
                rec.samples.push_back(PowerDbm(to_double(tokens[i], file, line.number)));
            set.records.push_back(std::move(rec));
        } else if (key == "tx_power_dbm") {
            if (tokens.size() != 2)
                throw ParseError(file, line.number, "tx_power_dbm requires one value");
            set.rig.transmit_power = PowerDbm(to_double(tokens[1], file, line.number));
        } else if (key == "loss_exponent") {
            if (tokens.size() != 2)
                throw ParseError(file, line.number, "loss_exponent requires one value");
            set.rig.loss_exponent = to_double(tokens[1], file, line.number);
        } else if (key == "connector_loss_db") {
            if (tokens.size() != 2)
                throw ParseError(file, line.number, "connector_loss_db requires one value");
            set.rig.connector_loss = LossDb(to_double(tokens[1], file, line.number));
        } else if (key == "rx_gain_dbd") {
            if (tokens.size() != 2)
                throw ParseError(file, line.number, "rx_gain_dbd requires one value");
            set.rig.receiver_gain_dbd = to_double(tokens[1], file, line.number);
        } else {
            throw ParseError(file, line.number, "unknown directive '" + key + "'");
        }
    }
    try {
        set.validate();
    } catch (const std::exception& e) {
        throw ParseError(file, 0, e.what());
    }
    return set;
}

CoverageMap parse_coverage_grid(const std::filesystem::path& path) {
    const std::string file = path.string();
    const auto lines = read_document(path, "lcx-coverage-grid");

    CoverageMap map;
    std::size_t row_index = 0;
    bool have_cells = false;
    for (const Line& line : lines) {
        const auto tokens = split(line.text);
        const std::string& key = tokens[0];
        if (!have_cells) {
            if (key == "frequency_ghz" && tokens.size() == 2) {
                map.frequency_hz = to_double(tokens[1], file, line.number) * 1e9;
            } else if (key == "engine" && tokens.size() == 2) {
                map.engine = engine_from_string(tokens[1], file, line.number);
            } else if (key == "quantile" && tokens.size() == 2) {
                map.quantile = quantile_from_string(tokens[1], file, line.number);
            } else if (key == "grid_origin" && tokens.size() == 3) {
                map.grid.origin = {to_double(tokens[1], file, line.number),
                                   to_double(tokens[2], file, line.number)};
            } else if (key == "grid_extent" && tokens.size() == 3) {
                map.grid.width_m = to_double(tokens[1], file, line.number);
                map.grid.height_m = to_double(tokens[2], file, line.number);
            } else if (key == "grid_resolution" && tokens.size() == 2) {
                map.grid.resolution_m = to_double(tokens[1], file, line.number);
            } else if (key == "cells" && tokens.size() == 3) {
                map.grid.nx = static_cast<std::size_t>(to_double(tokens[1], file, line.number));
                map.grid.ny = static_cast<std::size_t>(to_double(tokens[2], file, line.number));
                if (map.grid.nx == 0 || map.grid.ny == 0)
                    throw ParseError(file, line.number, "cell counts must be > 0");
                map.cells_dbm.reserve(map.grid.nx * map.grid.ny);
                have_cells = true;
            } else {
                throw ParseError(file, line.number, "unknown directive '" + key + "'");
            }
            continue;
        }
        if (row_index >= map.grid.ny)
            throw ParseError(file, line.number, "more grid rows than declared");
        if (tokens.size() != map.grid.nx)
            throw ParseError(file, line.number,
                             "grid row has " + std::to_string(tokens.size()) + " values, expected " +
                                 std::to_string(map.grid.nx));
        for (const std::string& token : tokens)
            map.cells_dbm.push_back(to_double(token, file, line.number));
        ++row_index;
    }
    if (!have_cells)
        throw ParseError(file, 0, "missing 'cells'");
    if (row_index != map.grid.ny)
        throw ParseError(file, 0, "grid has " + std::to_string(row_index) +
                                      " rows, expected " + std::to_string(map.grid.ny));
    if (map.frequency_hz <= 0.0)
        throw ParseError(file, 0, "missing 'frequency_ghz'");
    return map;
}

namespace {

std::string serialize_grid(const CoverageMap& map, const std::vector<double>& cells) {
    std::string out = "lcx-coverage-grid v1\n";
    out += "frequency_ghz " + fmt("%.9g", map.frequency_hz * 1e-9) + "\n";
    out += std::string("engine ") + to_string(map.engine) + "\n";
    out += std::string("quantile ") + to_string(map.quantile) + "\n";
    out += "grid_origin " + fmt_num(map.grid.origin.x) + " " + fmt_num(map.grid.origin.y) + "\n";
    out += "grid_extent " + fmt_num(map.grid.width_m) + " " + fmt_num(map.grid.height_m) + "\n";
    out += "grid_resolution " + fmt_num(map.grid.resolution_m) + "\n";
    out += "cells " + std::to_string(map.grid.nx) + " " + std::to_string(map.grid.ny) + "\n";
    for (std::size_t j = 0; j < map.grid.ny; ++j) {
        for (std::size_t i = 0; i < map.grid.nx; ++i) {
            out += format_dbm(cells[j * map.grid.nx + i]);
            out += i + 1 == map.grid.nx ? '\n' : ' ';
        }
    }
    return out;
}

int heatmap_pixel(double dbm, HeatmapWindow window) {
    const double t = (dbm - window.floor_dbm) / (window.ceil_dbm - window.floor_dbm);
    const double scaled = t * 255.0;
    // round half up, then clamp
    const int pixel = static_cast<int>(std::floor(scaled + 0.5));
    return std::min(255, std::max(0, pixel));
}

std::string serialize_pgm(const CoverageMap& map, HeatmapWindow window) {
    std::string out = "P2\n";
    out += "# lcxplan coverage heatmap | frequency_ghz " + fmt("%.9g", map.frequency_hz * 1e-9) +
           " | window_dbm " + fmt_num(window.floor_dbm) + " " + fmt_num(window.ceil_dbm) + "\n";
    out += std::to_string(map.grid.nx) + " " + std::to_string(map.grid.ny) + "\n255\n";
    // Image rows top to bottom: start with the highest-y grid row.
    std::size_t on_line = 0;
    for (std::size_t jj = 0; jj < map.grid.ny; ++jj) {
        const std::size_t j = map.grid.ny - 1 - jj;
        for (std::size_t i = 0; i < map.grid.nx; ++i) {
            out += std::to_string(heatmap_pixel(map.at(i, j), window));
            if (++on_line == 16) {
                out += '\n';
                on_line = 0;
            } else {
                out += ' ';
            }
        }
    }
    if (on_line != 0) {
        out.back() = '\n';
    }
    return out;
}

std::string serialize_map_manifest(const CoverageMap& map) {
    std::string out = "lcx-map-manifest v1\n";
    for (const auto& [key, value] : map.params_digest)
        out += "param " + key + " " + value + "\n";
    return out;
}

} // namespace

std::vector<std::filesystem::path> emit_coverage(const CoverageMap& map,
                                                 const std::filesystem::path& dir,
                                                 const std::string& base,
                                                 HeatmapWindow window) {
    if (map.cells_dbm.size() != map.grid.nx * map.grid.ny)
        throw std::domain_error("coverage map cell count does not match its grid");
    if (!(window.ceil_dbm > window.floor_dbm))
        throw std::domain_error("heatmap window must have ceil > floor");

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::filesystem::path p = dir / name;
        write_text_file(p, content);
        written.push_back(p);
    };

    emit(base + ".grid", serialize_grid(map, map.cells_dbm));
    emit(base + ".pgm", serialize_pgm(map, window));
    emit(base + ".manifest", serialize_map_manifest(map));
    if (!map.best_dbm.empty())
        emit(base + "_best.grid", serialize_grid(map, map.best_dbm));
    if (!map.worst_dbm.empty())
        emit(base + "_worst.grid", serialize_grid(map, map.worst_dbm));
    return written;
}

std::string serialize_error_table(const ErrorTable& table) {
    std::string out = "lcx-error-table v1\n";
    out += "# mean (simulated - measured) in dB; rows d_lat in m, columns frequency in GHz\n";
    out += "columns_ghz";
    for (double f : table.frequencies_hz)
        out += " " + fmt("%.9g", f * 1e-9);
    out += "\n";
    for (std::size_t r = 0; r < table.d_lats_m.size(); ++r) {
        out += "row " + fmt_num(table.d_lats_m[r]);
        for (std::size_t c = 0; c < table.frequencies_hz.size(); ++c) {
            const auto entry = table.at(r, c);
            out += entry ? " " + format_dbm(*entry) : " -";
        }
        out += "\n";
    }
    return out;
}

std::string serialize_rssi_table(const RssiTable& table, bool with_verdict) {
    std::string out = "lcx-rssi-table v1\n";
    out += "# mean received level in dBm; rows d_lat in m, columns d_lon in m\n";
    out += "frequency_ghz " + fmt("%.9g", table.frequency_hz * 1e-9) + "\n";
    out += "columns_d_lon_m";
    for (double d : table.d_lons_m)
        out += " " + fmt_num(d);
    out += "\n";
    for (std::size_t r = 0; r < table.d_lats_m.size(); ++r) {
        out += "row " + fmt_num(table.d_lats_m[r]);
        for (std::size_t c = 0; c < table.d_lons_m.size(); ++c) {
            const auto entry = table.mean_dbm[r * table.d_lons_m.size() + c];
            out += entry ? " " + format_dbm(*entry) : " -";
        }
        out += "\n";
    }
    if (with_verdict) {
        out += "sensitivity_dbm " + format_dbm(table.sensitivity.value) + "\n";
        out += std::string("verdict ") + (table.verdict ? "pass" : "fail") + "\n";
    }
    return out;
}

const std::vector<double>& preset_frequencies_ghz() {
    static const std::vector<double> presets{0.1, 0.2, 0.9, 1.8, 2.4, 3.6, 5.9};
    return presets;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
        out.close();
        std::error_code ec;
        std::filesystem::remove(path, ec);
        throw std::runtime_error("failed while writing file: " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string serialize_run_manifest(const RunManifest& manifest) {
    std::string out = "lcx-run-manifest v1\n";
    out += "command " + manifest.command + "\n";
    for (const std::string& arg : manifest.args)
        out += "arg " + arg + "\n";
    for (const auto& [role, path] : manifest.inputs) {
        char hex[24];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(read_text_file(path))));
        out += "input " + role + " fnv64 " + hex + " " + path + "\n";
    }
    for (const std::string& name : manifest.outputs)
        out += "output " + name + "\n";
    return out;
}

RunManifest parse_run_manifest(const std::filesystem::path& path) {
    const std::string file = path.string();
    RunManifest manifest;
    for (const Line& line : read_document(path, "lcx-run-manifest")) {
        const auto tokens = split(line.text);
        const std::string& key = tokens[0];
        const std::string rest = tokens.size() > 1 ? trim(line.text.substr(key.size())) : "";
        if (key == "command") {
            manifest.command = rest;
        } else if (key == "arg") {
            manifest.args.push_back(rest);
        } else if (key == "input") {
            if (tokens.size() < 5 || tokens[2] != "fnv64")
                throw ParseError(file, line.number, "input requires: role fnv64 hash path");
            std::string p = line.text;
            for (int skip = 0; skip < 4; ++skip) {
                const auto sp = p.find_first_of(" \t");
                p = trim(p.substr(sp));
            }
            manifest.inputs.emplace_back(tokens[1], p);
        } else if (key == "output") {
            manifest.outputs.push_back(rest);
        } else {
            throw ParseError(file, line.number, "unknown directive '" + key + "'");
        }
    }
    if (manifest.command.empty())
        throw ParseError(file, 0, "missing 'command'");
    return manifest;
}

} // namespace lcxplan
