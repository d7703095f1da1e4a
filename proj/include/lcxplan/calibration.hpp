#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcxplan/cable.hpp"
#include "lcxplan/environment.hpp"
#include "lcxplan/link_budget.hpp"

namespace lcxplan {

/// One CW measurement point: position along/off the cable plus the recorded
/// level samples.
struct MeasurementRecord {
    double d_lon_m = 0.0;
    double d_lat_m = 0.0;
    Frequency frequency{1e9};
    std::vector<PowerDbm> samples;
};

/// A field or laboratory campaign: records, the rig parameters in force
/// while measuring, and the cable layout the positions refer to.
struct MeasurementSet {
    std::vector<MeasurementRecord> records;
    LinkBudgetParams rig;
    CableLayout layout;
    std::string source_id;

    void validate() const;
};

/// Coupling-loss quantiles recovered from a measurement set.
struct CalibrationRow {
    double frequency_hz = 0.0;
    LossDb lc50_est;
    LossDb lc95_est;
    std::size_t sample_count = 0;
    bool short_cable = false; // cable shorter than the recommended 10 lambda
};

struct CalibrationResult {
    std::vector<CalibrationRow> rows; // sorted by frequency
    std::string source_id;
    Warnings warnings;
};

/// Mean (simulated - measured) per lateral distance and frequency.
struct ErrorTable {
    std::vector<double> d_lats_m;       // row keys, ascending
    std::vector<double> frequencies_hz; // column keys, ascending
    std::vector<std::optional<double>> entries_db; // row-major
    Warnings warnings;

    std::optional<double> at(std::size_t row, std::size_t col) const {
        return entries_db[row * frequencies_hz.size() + col];
    }
};

/// Mean received level per measurement position plus the coverage verdict
/// against a receiver sensitivity.
struct RssiTable {
    std::vector<double> d_lats_m; // row keys, ascending
    std::vector<double> d_lons_m; // column keys, ascending
    std::vector<std::optional<double>> mean_dbm; // row-major
    double frequency_hz = 0.0;
    PowerDbm sensitivity;
    bool verdict = false; // every mean >= sensitivity
};

/// Inverts the link budget for each sample taken at the reference lateral
/// distance (2 m +/- 1 cm) and reports nearest-rank 50 % / 95 % quantiles
/// per frequency. Frequencies present in the set without reference-distance
/// records raise a CalibrationError naming the frequency.
CalibrationResult estimate_coupling_loss(const MeasurementSet& set, const CableSpec& spec);

/// New spec with lc50/lc95 replaced at the calibrated frequencies; rows for
/// frequencies not yet tabulated are inserted with interpolated alpha.
CableSpec apply_calibration(const CableSpec& spec, const CalibrationResult& result);

/// Compares a campaign against simulated maps (bilinear-sampled at the
/// measurement coordinates). One map per measurement frequency is required.
ErrorTable error_table(const MeasurementSet& set, const std::vector<CoverageMap>& maps);

/// Mean level per (d_lat, d_lon) for a single-frequency set.
RssiTable rssi_table(const MeasurementSet& set, PowerDbm sensitivity);

/// Nearest-rank quantile of an unsorted sample set (q in (0, 1]).
double nearest_rank_quantile(std::vector<double> values, double q);

} // namespace lcxplan
