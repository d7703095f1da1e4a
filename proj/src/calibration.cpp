#include "lcxplan/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "lcxplan/errors.hpp"

namespace lcxplan {

namespace {

constexpr double reference_distance_tolerance_m = 0.01;

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string fmt_ghz(double hz) { return fmt_g(hz * 1e-9); }

// Frequencies compared with a relative tolerance; measurement files quote
// GHz values that parse to identical doubles.
bool same_frequency(double a_hz, double b_hz) {
    return std::abs(a_hz - b_hz) <= 1e-9 * std::max(a_hz, b_hz);
}

} // namespace

void MeasurementSet::validate() const {
    layout.validate();
    const double length = layout.length_m();
    for (const MeasurementRecord& rec : records) {
        if (rec.samples.empty())
            throw std::domain_error("measurement record needs at least one sample");
        if (!(rec.d_lat_m > 0.0))
            throw std::domain_error("measurement d_lat must be > 0");
        if (rec.d_lon_m < 0.0 || rec.d_lon_m > length + 1e-9)
            throw std::domain_error("measurement d_lon must lie within the cable length");
    }
}

double nearest_rank_quantile(std::vector<double> values, double q) {
    if (values.empty())
        throw std::domain_error("quantile of an empty sample set");
    if (!(q > 0.0) || q > 1.0)
        throw std::domain_error("quantile level must be in (0, 1]");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    // guard against q * n landing an ulp above an exact integer rank
    auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

CalibrationResult estimate_coupling_loss(const MeasurementSet& set, const CableSpec& spec) {
    set.validate();
    spec.validate();
    if (set.records.empty())
        throw CalibrationError("measurement set is empty");

    const double ref = spec.reference_lateral_distance_m;
    const double cable_length = set.layout.length_m();

    // Group inverted per-sample coupling losses by frequency.
    std::map<double, std::vector<double>> inverted;  // key: frequency in Hz
    std::map<double, bool> seen;
    for (const MeasurementRecord& rec : set.records) {
        const double f = rec.frequency.hertz();
        seen.emplace(f, false);
        if (std::abs(rec.d_lat_m - ref) > reference_distance_tolerance_m)
            continue;
        seen[f] = true;
        const CableParams cp = interpolate_cable_params(spec, rec.frequency, nullptr);
        const LossDb l_l = longitudinal_loss(cp.alpha_db_per_m, rec.d_lon_m);
        for (const PowerDbm& sample : rec.samples) {
            inverted[f].push_back(
                invert_for_coupling_loss(set.rig, l_l, rec.d_lat_m, sample).value);
        }
    }

    for (const auto& [f, has_ref] : seen) {
        if (!has_ref)
            throw CalibrationError("no measurements at the reference lateral distance for " +
                                   fmt_ghz(f) + " GHz");
    }

    CalibrationResult result;
    result.source_id = set.source_id;
    for (auto& [f, losses] : inverted) {
        CalibrationRow row;
        row.frequency_hz = f;
        row.lc50_est = LossDb(nearest_rank_quantile(losses, 0.50));
        row.lc95_est = LossDb(nearest_rank_quantile(losses, 0.95));
        row.sample_count = losses.size();
        const double lambda = speed_of_light_m_per_s / f;
        row.short_cable = cable_length < 10.0 * lambda;
        if (row.short_cable) {
            result.warnings.push_back("cable length " + fmt_g(cable_length) +
                                      " m is below 10 lambda at " + fmt_ghz(f) +
                                      " GHz; coupling-loss estimate may be unreliable");
        }
        result.rows.push_back(row);
    }
    return result;
}

CableSpec apply_calibration(const CableSpec& spec, const CalibrationResult& result) {
    spec.validate();
    CableSpec out = spec;
    for (const CalibrationRow& row : result.rows) {
        auto match = std::find_if(out.rows.begin(), out.rows.end(), [&](const CableParamRow& r) {
            return same_frequency(r.frequency_hz, row.frequency_hz);
        });
        if (match != out.rows.end()) {
            match->lc50 = row.lc50_est;
            match->lc95 = row.lc95_est;
            continue;
        }
        // New frequency: inherit alpha by interpolation and insert sorted.
        const CableParams cp =
            interpolate_cable_params(spec, Frequency(row.frequency_hz), nullptr);
        CableParamRow fresh;
        fresh.frequency_hz = row.frequency_hz;
        fresh.alpha_db_per_m = cp.alpha_db_per_m;
        fresh.lc50 = row.lc50_est;
        fresh.lc95 = row.lc95_est;
        auto pos = std::find_if(out.rows.begin(), out.rows.end(), [&](const CableParamRow& r) {
            return r.frequency_hz > row.frequency_hz;
        });
        out.rows.insert(pos, fresh);
    }
    out.validate();
    return out;
}

ErrorTable error_table(const MeasurementSet& set, const std::vector<CoverageMap>& maps) {
    set.validate();

    auto map_for = [&](double f_hz) -> const CoverageMap* {
        for (const CoverageMap& m : maps)
            if (same_frequency(m.frequency_hz, f_hz))
                return &m;
        return nullptr;
    };

    struct Bucket {
        double sum = 0.0;
        std::size_t count = 0;
    };
    std::map<std::pair<double, double>, Bucket> buckets; // (d_lat, f) -> mean parts

    ErrorTable table;
    for (const MeasurementRecord& rec : set.records) {
        const CoverageMap* map = map_for(rec.frequency.hertz());
        if (!map)
            throw std::domain_error("no coverage map for measurement frequency " +
                                    fmt_ghz(rec.frequency.hertz()) + " GHz");
        const Point pos = set.layout.plan_position(rec.d_lon_m, rec.d_lat_m);
        if (!map->grid.contains(pos)) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "record at d_lon=%g m d_lat=%g m (%g, %g) lies outside the "
                          "coverage grid; skipped",
                          rec.d_lon_m, rec.d_lat_m, pos.x, pos.y);
            table.warnings.push_back(buf);
            continue;
        }
        const double simulated = map->sample_bilinear(pos);
        double measured = 0.0;
        for (const PowerDbm& s : rec.samples)
            measured += s.value;
        measured /= static_cast<double>(rec.samples.size());

        Bucket& b = buckets[{rec.d_lat_m, rec.frequency.hertz()}];
        b.sum += simulated - measured;
        b.count += 1;
    }

    for (const auto& [key, bucket] : buckets) {
        if (std::find(table.d_lats_m.begin(), table.d_lats_m.end(), key.first) ==
            table.d_lats_m.end())
            table.d_lats_m.push_back(key.first);
        if (std::find(table.frequencies_hz.begin(), table.frequencies_hz.end(), key.second) ==
            table.frequencies_hz.end())
            table.frequencies_hz.push_back(key.second);
    }
    std::sort(table.d_lats_m.begin(), table.d_lats_m.end());
    std::sort(table.frequencies_hz.begin(), table.frequencies_hz.end());

    table.entries_db.assign(table.d_lats_m.size() * table.frequencies_hz.size(), std::nullopt);
    for (const auto& [key, bucket] : buckets) {
        const auto row = static_cast<std::size_t>(
            std::find(table.d_lats_m.begin(), table.d_lats_m.end(), key.first) -
            table.d_lats_m.begin());
        const auto col = static_cast<std::size_t>(
            std::find(table.frequencies_hz.begin(), table.frequencies_hz.end(), key.second) -
            table.frequencies_hz.begin());
        table.entries_db[row * table.frequencies_hz.size() + col] =
            bucket.sum / static_cast<double>(bucket.count);
    }
    return table;
}

RssiTable rssi_table(const MeasurementSet& set, PowerDbm sensitivity) {
    set.validate();
    if (set.records.empty())
        throw std::domain_error("measurement set is empty");
    const double f0 = set.records.front().frequency.hertz();
    for (const MeasurementRecord& rec : set.records) {
        if (!same_frequency(rec.frequency.hertz(), f0))
            throw std::domain_error("rssi table requires a single-frequency measurement set");
    }

    struct Bucket {
        double sum = 0.0;
        std::size_t count = 0;
    };
    std::map<std::pair<double, double>, Bucket> buckets; // (d_lat, d_lon)
    for (const MeasurementRecord& rec : set.records) {
        Bucket& b = buckets[{rec.d_lat_m, rec.d_lon_m}];
        for (const PowerDbm& s : rec.samples) {
            b.sum += s.value;
            b.count += 1;
        }
    }

    RssiTable table;
    table.frequency_hz = f0;
    table.sensitivity = sensitivity;
    for (const auto& [key, bucket] : buckets) {
        if (std::find(table.d_lats_m.begin(), table.d_lats_m.end(), key.first) ==
            table.d_lats_m.end())
            table.d_lats_m.push_back(key.first);
        if (std::find(table.d_lons_m.begin(), table.d_lons_m.end(), key.second) ==
            table.d_lons_m.end())
            table.d_lons_m.push_back(key.second);
    }
    std::sort(table.d_lats_m.begin(), table.d_lats_m.end());
    std::sort(table.d_lons_m.begin(), table.d_lons_m.end());

    table.mean_dbm.assign(table.d_lats_m.size() * table.d_lons_m.size(), std::nullopt);
    table.verdict = true;
    for (const auto& [key, bucket] : buckets) {
        const auto row = static_cast<std::size_t>(
            std::find(table.d_lats_m.begin(), table.d_lats_m.end(), key.first) -
            table.d_lats_m.begin());
        const auto col = static_cast<std::size_t>(
            std::find(table.d_lons_m.begin(), table.d_lons_m.end(), key.second) -
            table.d_lons_m.begin());
        const double mean = bucket.sum / static_cast<double>(bucket.count);
        table.mean_dbm[row * table.d_lons_m.size() + col] = mean;
        if (mean < sensitivity.value)
            table.verdict = false;
    }
    return table;
}

} // namespace lcxplan
