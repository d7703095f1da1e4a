#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcxplan/geometry.hpp"
#include "lcxplan/units.hpp"

namespace lcxplan {

/// Sink for non-fatal diagnostics (clamped extrapolation and the like).
using Warnings = std::vector<std::string>;

/// One row of the frequency-tabulated cable datasheet.
struct CableParamRow {
    double frequency_hz = 0.0;
    double alpha_db_per_m = 0.0; // longitudinal attenuation factor
    LossDb lc50;                 // coupling loss, 50 % quantile at 2 m
    LossDb lc95;                 // coupling loss, 95 % quantile at 2 m
};

/// Electrical cable parameters as tabulated by the manufacturer (plus the
/// datasheet uncertainty on the coupling loss). The coupling-loss quantiles
/// refer to measurements with a half-wave dipole at the reference lateral
/// distance.
struct CableSpec {
    std::string name;
    std::string mode = "radiating"; // radiating | coupled, metadata only
    std::vector<CableParamRow> rows; // sorted by frequency, strictly increasing
    LossDb lc_tolerance{10.0};
    double reference_lateral_distance_m = 2.0;

    void validate() const;
};

/// Installed cable geometry: polyline path in plan coordinates, fed from the
/// first vertex (parsers normalize the direction), terminated into a matched
/// load so no backward wave is modeled.
enum class Termination { matched_load };

struct CableLayout {
    std::vector<Point> path;
    double mount_height_m = 0.0; // informational
    Termination termination = Termination::matched_load;

    double length_m() const { return polyline_length(path); }

    void validate() const;

    /// Plan coordinate of the cable at arc length d_lon from the feed.
    Point point_at(double d_lon_m) const { return polyline_point_at(path, d_lon_m); }

    /// Plan coordinate at lateral offset d_lat to the left of the feed-to-end
    /// direction. This is the side convention used for measurement campaigns.
    Point plan_position(double d_lon_m, double d_lat_m) const;
};

struct Radiator {
    Point position;
    double d_lon_m = 0.0;
    PowerDbm feed_power; // P_T - alpha * d_lon at this point
};

/// The cable discretized into point radiators for one frequency.
struct RadiatorChain {
    std::vector<Radiator> radiators;
    double spacing_m = 0.0;
    double frequency_hz = 0.0;
};

/// Cable parameters at an arbitrary frequency, interpolated piecewise
/// linearly in log10(f). Queries outside the table but within
/// [0.5 x lowest, 2 x highest] row clamp to the end row and warn; anything
/// further out is rejected.
struct CableParams {
    double alpha_db_per_m = 0.0;
    LossDb lc50;
    LossDb lc95;
};

CableParams interpolate_cable_params(const CableSpec& spec, const Frequency& f,
                                     Warnings* warnings = nullptr);

/// Places radiators along the path at arc-length steps of `interval_m`,
/// midpoint convention (first at interval/2), and applies the longitudinal
/// loss to each feed power.
RadiatorChain discretize(const CableLayout& layout, const CableSpec& spec,
                         const Frequency& f, PowerDbm transmit_power,
                         double interval_m, Warnings* warnings = nullptr);

} // namespace lcxplan
