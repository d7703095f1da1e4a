#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcxplan/cable.hpp"
#include "lcxplan/geometry.hpp"
#include "lcxplan/units.hpp"

namespace lcxplan {

/// Reflecting crash-barrier segment. The gain is applied once per specular
/// bounce; it may be negative (a lossy reflector) or positive (the barrier
/// notch can focus energy toward the receiver).
struct BarrierSegment {
    Point a;
    Point b;
    double reflection_gain_db = 0.0;
};

/// Obstacle with a flat penetration loss, charged once per crossed boundary.
struct Obstacle {
    ConvexPolygon shape;
    LossDb penetration_loss;
};

/// Plan-view scene: receiver grid plus reflectors and obstacles.
struct Environment {
    Point grid_origin{0.0, 0.0};
    double grid_width_m = 0.0;
    double grid_height_m = 0.0;
    double grid_resolution_m = 1.0;
    std::vector<BarrierSegment> barriers;
    std::vector<Obstacle> obstacles;
    double receiver_height_m = 0.0; // informational

    void validate() const;

    std::size_t cells_x() const;
    std::size_t cells_y() const;
    Point cell_center(std::size_t i, std::size_t j) const;
};

/// Cell centers in deterministic row-major order (x fastest).
std::vector<Point> grid_cells(const Environment& env);

/// Nearest lateral distance from a receiver point to the cable axis,
/// clamped from below.
double lateral_distance(Point p, const CableLayout& layout,
                        double lateral_clamp_m = 0.1);

/// Sum of penetration losses of obstacles whose boundary the open segment
/// a-b crosses; each obstacle charged once, grazing contact exempt.
LossDb path_obstruction_loss(Point a, Point b, const Environment& env);

enum class Engine { spl, dominant_path, coherent };
enum class Quantile { lc50, lc95 };

const char* to_string(Engine e);
const char* to_string(Quantile q);

/// Grid geometry carried by a coverage map (sufficient to resample it).
struct GridSpec {
    Point origin{0.0, 0.0};
    double width_m = 0.0;
    double height_m = 0.0;
    double resolution_m = 1.0;
    std::size_t nx = 0;
    std::size_t ny = 0;

    static GridSpec from_environment(const Environment& env);
    Point cell_center(std::size_t i, std::size_t j) const;
    bool contains(Point p) const;
    bool same_grid(const GridSpec& other) const;
};

/// Received power over the receiver grid for one frequency and one engine,
/// with enough parameter provenance to reproduce the run.
struct CoverageMap {
    GridSpec grid;
    double frequency_hz = 0.0;
    Engine engine = Engine::spl;
    Quantile quantile = Quantile::lc50;
    std::vector<double> cells_dbm; // row-major, j * nx + i
    // Optional datasheet-tolerance band (L_C -/+ tolerance).
    std::vector<double> best_dbm;
    std::vector<double> worst_dbm;
    std::vector<std::pair<std::string, std::string>> params_digest;

    double at(std::size_t i, std::size_t j) const { return cells_dbm[j * grid.nx + i]; }

    /// Bilinear interpolation over the four surrounding cell centers;
    /// exact at centers, clamped at the outermost ring.
    double sample_bilinear(Point p) const;
};

} // namespace lcxplan
