#include "morpho/geometry.hpp"

#include <algorithm>
#include <numbers>

#include "morpho/errors.hpp"

namespace morpho {

double signed_area(std::span<const Point2> vertices) {
    const std::size_t n = vertices.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        twice += cross(vertices[i], vertices[(i + 1) % n]);
    }
    return 0.5 * twice;
}

namespace {

void validate_vertices(const std::vector<Point2>& v) {
    if (v.size() < 3) {
        throw InvalidInput("polygon needs at least 3 vertices, got " + std::to_string(v.size()));
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!is_finite(v[i])) {
            throw InvalidInput("non-finite coordinate at vertex " + std::to_string(i));
        }
    }
}

}  // namespace

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    validate_vertices(vertices_);
    const double a = area();
    if (a == 0.0) throw InvalidInput("polygon has zero signed area");
    if (a < 0.0) throw OrientationError("polygon is clockwise; counterclockwise order required");
}

Polygon Polygon::oriented(std::vector<Point2> vertices, bool* reversed) {
    validate_vertices(vertices);
    const bool flip = signed_area(vertices) < 0.0;
    if (flip) std::reverse(vertices.begin(), vertices.end());
    if (reversed) *reversed = flip;
    return Polygon(std::move(vertices));
}

namespace {

bool on_segment(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int sign(double v) { return (v > 0) - (v < 0); }

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    const int o1 = sign(orient(a, b, c));
    const int o2 = sign(orient(a, b, d));
    const int o3 = sign(orient(c, d, a));
    const int o4 = sign(orient(c, d, b));
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

}  // namespace

bool is_simple(std::span<const Point2> v) {
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = v[i], b = v[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            // adjacent edges share a vertex
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(a, b, v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

std::vector<Point2> rotated(std::span<const Point2> pts, double theta, Point2 center) {
    const double c = std::cos(theta), s = std::sin(theta);
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (Point2 p : pts) {
        const Point2 d = p - center;
        out.push_back(center + Point2{c * d.x - s * d.y, s * d.x + c * d.y});
    }
    return out;
}

std::vector<Point2> translated(std::span<const Point2> pts, Point2 offset) {
    std::vector<Point2> out(pts.begin(), pts.end());
    for (auto& p : out) p = p + offset;
    return out;
}

std::vector<Point2> scaled(std::span<const Point2> pts, double factor) {
    std::vector<Point2> out(pts.begin(), pts.end());
    for (auto& p : out) p = factor * p;
    return out;
}

std::vector<Point2> regular_polygon(int n, double circumradius, double phase, Point2 center) {
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double a = phase + 2.0 * std::numbers::pi * k / n;
        out.push_back(center + Point2{circumradius * std::cos(a), circumradius * std::sin(a)});
    }
    return out;
}

}  // namespace morpho
