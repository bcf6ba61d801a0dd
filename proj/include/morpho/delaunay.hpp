#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "morpho/geometry.hpp"

namespace morpho {

/// Delaunay triangulation built by incremental Bowyer-Watson insertion in
/// input order. The exterior is modelled by a single vertex at infinity, so
/// the convex hull is exact and no bounding super-triangle is needed.
///
/// In-circle tests treat |det| <= 1e-12 * (local scale)^4 as "on the
/// circle"; such points do not conflict with the triangle and the event is
/// counted in ties(). Co-circular inputs therefore get one valid diagonal.
class Delaunay {
public:
    static constexpr int kInfinite = -1;

    struct Triangle {
        std::array<int, 3> v;    // counterclockwise; one entry may be kInfinite
        std::array<int, 3> adj;  // adj[k] is across the edge opposite v[k]
    };

    // Throws DegenerateGeometry for fewer than 3 distinct points or
    // all-collinear input; InvalidInput for non-finite or duplicate points.
    explicit Delaunay(std::span<const Point2> points);

    std::span<const Point2> points() const { return points_; }

    // Finite triangles only, counterclockwise vertex indices.
    std::vector<std::array<int, 3>> triangles() const;

    // Sorted Delaunay neighbors of every input point.
    std::vector<std::vector<int>> neighbors() const;

    // Number of in-circle evaluations that fell within the tie tolerance.
    std::size_t ties() const { return ties_; }

private:
    bool conflicts(const Triangle& tri, Point2 p);
    int locate(Point2 p, int start) const;
    void insert(int index);

    std::vector<Point2> points_;
    std::vector<Triangle> tris_;
    std::vector<std::uint8_t> alive_;
    std::size_t ties_ = 0;
    int last_ = 0;
};

// Circumcenter of a non-degenerate triangle.
Point2 circumcenter(Point2 a, Point2 b, Point2 c);

}  // namespace morpho
