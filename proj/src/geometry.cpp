#include "lcxplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lcxplan {

double norm(Point p) { return std::hypot(p.x, p.y); }
double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double point_segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0)
        return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

double point_polyline_distance(Point p, const std::vector<Point>& polyline) {
    if (polyline.size() < 2)
        throw std::domain_error("polyline needs at least two vertices");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
        best = std::min(best, point_segment_distance(p, polyline[i], polyline[i + 1]));
    return best;
}

double polyline_length(const std::vector<Point>& polyline) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
        len += distance(polyline[i], polyline[i + 1]);
    return len;
}

namespace {

// Locates the segment owning arc length s and the offset within it.
std::size_t locate_segment(const std::vector<Point>& polyline, double& s) {
    const double total = polyline_length(polyline);
    s = std::clamp(s, 0.0, total);
    double acc = 0.0;
    for (std::size_t i = 0; i + 2 < polyline.size(); ++i) {
        const double seg = distance(polyline[i], polyline[i + 1]);
        if (s < acc + seg) {
            s -= acc;
            return i;
        }
        acc += seg;
    }
    s -= acc;
    return polyline.size() - 2;
}

} // namespace

Point polyline_point_at(const std::vector<Point>& polyline, double s) {
    if (polyline.size() < 2)
        throw std::domain_error("polyline needs at least two vertices");
    double offset = s;
    const std::size_t i = locate_segment(polyline, offset);
    const Point a = polyline[i];
    const Point b = polyline[i + 1];
    const double seg = distance(a, b);
    const double t = seg > 0.0 ? offset / seg : 0.0;
    return a + t * (b - a);
}

Point polyline_tangent_at(const std::vector<Point>& polyline, double s) {
    if (polyline.size() < 2)
        throw std::domain_error("polyline needs at least two vertices");
    double offset = s;
    const std::size_t i = locate_segment(polyline, offset);
    const Point d = polyline[i + 1] - polyline[i];
    const double len = norm(d);
    if (len == 0.0)
        throw std::domain_error("degenerate polyline segment");
    return (1.0 / len) * d;
}

Point mirror_point(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0)
        throw std::domain_error("cannot mirror across a degenerate segment");
    const double t = dot(p - a, ab) / len2;
    const Point foot = a + t * ab;
    return foot + (foot - p);
}

bool segments_intersect(Point a, Point b, Point c, Point d, double* t_ab) {
    const Point r = b - a;
    const Point s = d - c;
    const double denom = cross(r, s);
    if (denom == 0.0)
        return false; // parallel or collinear: no proper crossing
    const double t = cross(c - a, s) / denom;
    const double u = cross(c - a, r) / denom;
    if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0)
        return false;
    if (t_ab)
        *t_ab = t;
    return true;
}

ConvexPolygon::ConvexPolygon(std::vector<Point> vertices)
    : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3)
        throw std::domain_error("polygon needs at least three vertices");

    double area2 = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Point a = vertices_[i];
        const Point b = vertices_[(i + 1) % vertices_.size()];
        area2 += cross(a, b);
    }
    if (std::abs(area2) < 1e-12)
        throw std::domain_error("polygon is degenerate (zero area)");
    if (area2 < 0.0)
        std::reverse(vertices_.begin(), vertices_.end());

    // Convexity: no right turn once counter-clockwise.
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = vertices_[i];
        const Point b = vertices_[(i + 1) % n];
        const Point c = vertices_[(i + 2) % n];
        if (cross(b - a, c - b) < -1e-12)
            throw std::domain_error("polygon is not convex");
    }
}

double ConvexPolygon::signed_area() const {
    double area2 = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        area2 += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    return 0.5 * area2;
}

bool ConvexPolygon::contains(Point p) const {
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = vertices_[i];
        const Point b = vertices_[(i + 1) % n];
        if (cross(b - a, p - a) <= 0.0)
            return false;
    }
    return true;
}

bool ConvexPolygon::segment_crosses(Point a, Point b) const {
    // Clip the line a + t(b - a) against every inward half-plane and keep
    // the strict-interior chord [t0, t1].
    constexpr double eps = 1e-12;
    const Point d = b - a;
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();

    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = vertices_[i];
        const Point q = vertices_[(i + 1) % n];
        const Point edge = q - p;
        const Point inward{-edge.y, edge.x}; // left of a CCW edge
        const double denom = dot(inward, d);
        const double num = dot(inward, p - a);
        if (denom == 0.0) {
            if (num >= 0.0)
                return false; // line never strictly inside this half-plane
            continue;
        }
        const double t = num / denom;
        if (denom > 0.0)
            t0 = std::max(t0, t);
        else
            t1 = std::min(t1, t);
    }

    if (!(t1 - t0 > eps))
        return false; // grazing or disjoint
    if (std::max(t0, 0.0) >= std::min(t1, 1.0))
        return false; // chord outside the segment
    // A boundary transition must happen strictly within the open segment.
    const bool enters = t0 > eps && t0 < 1.0 - eps;
    const bool exits = t1 > eps && t1 < 1.0 - eps;
    return enters || exits;
}

} // namespace lcxplan
