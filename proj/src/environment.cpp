#include "lcxplan/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lcxplan {

void Environment::validate() const {
    if (!(grid_resolution_m > 0.0))
        throw std::domain_error("grid resolution must be > 0");
    if (!(grid_width_m > 0.0) || !(grid_height_m > 0.0))
        throw std::domain_error("grid extents must be > 0");
    for (const BarrierSegment& b : barriers) {
        if (distance(b.a, b.b) == 0.0)
            throw std::domain_error("barrier segment endpoints must be distinct");
    }
    // Obstacle polygons are validated on construction (ConvexPolygon).
}

static std::size_t cell_count(double extent, double res) {
    return static_cast<std::size_t>(std::ceil(extent / res - 1e-12));
}

std::size_t Environment::cells_x() const { return cell_count(grid_width_m, grid_resolution_m); }
std::size_t Environment::cells_y() const { return cell_count(grid_height_m, grid_resolution_m); }

Point Environment::cell_center(std::size_t i, std::size_t j) const {
    return {grid_origin.x + (static_cast<double>(i) + 0.5) * grid_resolution_m,
            grid_origin.y + (static_cast<double>(j) + 0.5) * grid_resolution_m};
}

std::vector<Point> grid_cells(const Environment& env) {
    env.validate();
    std::vector<Point> cells;
    cells.reserve(env.cells_x() * env.cells_y());
    for (std::size_t j = 0; j < env.cells_y(); ++j)
        for (std::size_t i = 0; i < env.cells_x(); ++i)
            cells.push_back(env.cell_center(i, j));
    return cells;
}

double lateral_distance(Point p, const CableLayout& layout, double lateral_clamp_m) {
    return std::max(point_polyline_distance(p, layout.path), lateral_clamp_m);
}

LossDb path_obstruction_loss(Point a, Point b, const Environment& env) {
    if (a.x == b.x && a.y == b.y)
        throw std::domain_error("obstruction path endpoints must differ");
    double loss = 0.0;
    for (const Obstacle& obs : env.obstacles) {
        if (obs.shape.segment_crosses(a, b))
            loss += obs.penetration_loss.value;
    }
    return LossDb(loss);
}

const char* to_string(Engine e) {
    switch (e) {
    case Engine::spl: return "spl";
    case Engine::dominant_path: return "dominant_path";
    case Engine::coherent: return "coherent";
    }
    return "?";
}

const char* to_string(Quantile q) {
    return q == Quantile::lc50 ? "lc50" : "lc95";
}

GridSpec GridSpec::from_environment(const Environment& env) {
    env.validate();
    GridSpec g;
    g.origin = env.grid_origin;
    g.width_m = env.grid_width_m;
    g.height_m = env.grid_height_m;
    g.resolution_m = env.grid_resolution_m;
    g.nx = env.cells_x();
    g.ny = env.cells_y();
    return g;
}

Point GridSpec::cell_center(std::size_t i, std::size_t j) const {
    return {origin.x + (static_cast<double>(i) + 0.5) * resolution_m,
            origin.y + (static_cast<double>(j) + 0.5) * resolution_m};
}

bool GridSpec::contains(Point p) const {
    return p.x >= origin.x && p.x <= origin.x + width_m &&
           p.y >= origin.y && p.y <= origin.y + height_m;
}

bool GridSpec::same_grid(const GridSpec& other) const {
    return nx == other.nx && ny == other.ny &&
           std::abs(origin.x - other.origin.x) < 1e-9 &&
           std::abs(origin.y - other.origin.y) < 1e-9 &&
           std::abs(resolution_m - other.resolution_m) < 1e-9;
}

double CoverageMap::sample_bilinear(Point p) const {
    if (grid.nx == 0 || grid.ny == 0 || cells_dbm.size() != grid.nx * grid.ny)
        throw std::domain_error("coverage map has no cells");

    const double u = (p.x - grid.origin.x) / grid.resolution_m - 0.5;
    const double v = (p.y - grid.origin.y) / grid.resolution_m - 0.5;

    const double maxi = static_cast<double>(grid.nx) - 1.0;
    const double maxj = static_cast<double>(grid.ny) - 1.0;
    const double uc = std::clamp(u, 0.0, maxi);
    const double vc = std::clamp(v, 0.0, maxj);

    std::size_t i0 = static_cast<std::size_t>(std::floor(uc));
    std::size_t j0 = static_cast<std::size_t>(std::floor(vc));
    i0 = std::min(i0, grid.nx >= 2 ? grid.nx - 2 : std::size_t{0});
    j0 = std::min(j0, grid.ny >= 2 ? grid.ny - 2 : std::size_t{0});
    const std::size_t i1 = std::min(i0 + 1, grid.nx - 1);
    const std::size_t j1 = std::min(j0 + 1, grid.ny - 1);

    const double fu = uc - static_cast<double>(i0);
    const double fv = vc - static_cast<double>(j0);

    const double v00 = at(i0, j0);
    const double v10 = at(i1, j0);
    const double v01 = at(i0, j1);
    const double v11 = at(i1, j1);
    const double bottom = v00 + fu * (v10 - v00);
    const double top = v01 + fu * (v11 - v01);
    return bottom + fv * (top - bottom);
}

} // namespace lcxplan
