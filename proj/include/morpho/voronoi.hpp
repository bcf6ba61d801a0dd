#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "morpho/accumulator.hpp"
#include "morpho/geometry.hpp"

namespace morpho {

struct Box {
    double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    double diagonal() const;
    bool contains(Point2 p) const { return xmin <= p.x && p.x <= xmax && ymin <= p.y && p.y <= ymax; }
    bool strictly_contains(Point2 p) const {
        return xmin < p.x && p.x < xmax && ymin < p.y && p.y < ymax;
    }
    std::vector<Point2> corners() const;
    friend bool operator==(const Box&, const Box&) = default;
};

// Tight bounding box of the points, expanded by pad on every side.
Box bounding_box(std::span<const Point2> points, double pad = 0.0);

/// Generators plus observation window. The constructor enforces: at least
/// three points, all finite and inside the box, pairwise separation above
/// 1e-10 times the box diagonal (InvalidInput otherwise, naming indices).
class PointSet {
public:
    PointSet(std::vector<Point2> points, Box box);

    std::span<const Point2> points() const { return points_; }
    const Box& box() const { return box_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<Point2> points_;
    Box box_;
};

enum class BoundaryPolicy {
    clip,            // intersect every cell with the box
    exclude_border,  // like clip, but cells touching the box are dropped from analyses
    periodic,        // tessellate the 3x3 periodic tiling and keep the central copy
};

struct VoronoiCellResult {
    std::size_t index = 0;  // generator index in the input PointSet
    Point2 generator;
    Polygon cell;
    MinkowskiAccumulator metrics;
    bool is_border = false;
};

/// Convex polygon intersected with the half-plane {x : dot(x, normal) <= offset}.
/// Near-coincident output vertices (closer than merge_tol) are collapsed.
std::vector<Point2> clip_halfplane(std::span<const Point2> convex, Point2 normal, double offset,
                                   double merge_tol = 0.0);

/// One cell per generator, in input order. Under clip and exclude_border
/// every cell is clipped to the box and flagged is_border when it touches
/// the box boundary; under periodic, cells are unclipped images of the
/// periodic tessellation and never flagged.
/// Throws DegenerateGeometry for collinear input and InvalidInput when a
/// periodic point lies on the box boundary.
std::vector<VoronoiCellResult> voronoi_cells(const PointSet& points, BoundaryPolicy policy,
                                             int s_max = kDefaultSMax);

/// Per-cell Minkowski tensors. Under exclude_border the border cells are
/// removed from the returned list.
std::vector<VoronoiCellResult> analyze_point_pattern(const PointSet& points, BoundaryPolicy policy,
                                                     int s_max = kDefaultSMax);

struct Histogram {
    std::vector<double> bin_edges;
    std::vector<std::size_t> counts;

    std::size_t total() const;
};

// Histogram of q_s over [0, 1] with equal-width bins; q = 1 lands in the top
// bin. Throws EmptyHistogram when no cell is selected, RangeError for bad s.
Histogram q_histogram(std::span<const VoronoiCellResult> results, int s, int bins,
                      bool include_border);

}  // namespace morpho
