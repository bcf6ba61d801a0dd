#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace morpho {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double k, Point2 a) { return {k * a.x, k * a.y}; }
    friend constexpr bool operator==(Point2, Point2) = default;
};

inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Twice the signed area of triangle abc; positive when counterclockwise.
inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

// Signed shoelace area; positive for counterclockwise vertex order.
double signed_area(std::span<const Point2> vertices);

// Closed simple polygon with counterclockwise vertices. The last vertex
// connects back to the first; do not repeat the first vertex at the end.
class Polygon {
public:
    Polygon() = default;

    // Validates size (>= 3), finiteness and positive orientation.
    // Throws InvalidInput or OrientationError.
    explicit Polygon(std::vector<Point2> vertices);

    // Like the constructor, but reverses clockwise input instead of
    // rejecting it. Sets *reversed when given.
    static Polygon oriented(std::vector<Point2> vertices, bool* reversed = nullptr);

    std::span<const Point2> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Point2& operator[](std::size_t i) const { return vertices_[i]; }

    double area() const { return signed_area(vertices_); }

private:
    std::vector<Point2> vertices_;
};

// O(n^2) test for self-intersections between non-adjacent edges.
bool is_simple(std::span<const Point2> vertices);

// Rigid-motion helpers used by tests and fixtures.
std::vector<Point2> rotated(std::span<const Point2> pts, double theta, Point2 center = {});
std::vector<Point2> translated(std::span<const Point2> pts, Point2 offset);
std::vector<Point2> scaled(std::span<const Point2> pts, double factor);

// Regular n-gon with the given circumradius, first vertex at angle phase.
std::vector<Point2> regular_polygon(int n, double circumradius = 1.0, double phase = 0.0,
                                    Point2 center = {});

}  // namespace morpho
