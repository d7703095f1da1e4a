#pragma once

#include <vector>

namespace lcxplan {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

double norm(Point p);
double distance(Point a, Point b);

/// Shortest distance from p to the closed segment [a, b].
double point_segment_distance(Point p, Point a, Point b);

/// Shortest distance from p to a polyline (>= 2 vertices).
double point_polyline_distance(Point p, const std::vector<Point>& polyline);

double polyline_length(const std::vector<Point>& polyline);

/// Point at arc length s from the first vertex; s is clamped to [0, length].
Point polyline_point_at(const std::vector<Point>& polyline, double s);

/// Unit tangent of the segment containing arc length s (half-open intervals,
/// last segment owns the endpoint).
Point polyline_tangent_at(const std::vector<Point>& polyline, double s);

/// Mirror image of p across the infinite line through a and b.
Point mirror_point(Point p, Point a, Point b);

/// Proper intersection of segments [a,b] and [c,d]; on success writes the
/// parameter t along a->b. Touching contacts do not count.
bool segments_intersect(Point a, Point b, Point c, Point d, double* t_ab);

/// Convex polygon in plan coordinates. Vertices are normalized to
/// counter-clockwise order on construction.
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const { return vertices_; }

    bool contains(Point p) const;        // strict interior
    double signed_area() const;

    /// True when the open segment (a, b) crosses the polygon boundary into
    /// the interior. Grazing contact (touching a vertex, or running along an
    /// edge) does not count, nor does a segment that stays entirely inside.
    bool segment_crosses(Point a, Point b) const;

private:
    std::vector<Point> vertices_;
};

} // namespace lcxplan
