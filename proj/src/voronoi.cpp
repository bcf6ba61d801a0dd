#include "morpho/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "morpho/delaunay.hpp"
#include "morpho/errors.hpp"

namespace morpho {

double Box::diagonal() const { return std::hypot(width(), height()); }

std::vector<Point2> Box::corners() const {
    return {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
}

Box bounding_box(std::span<const Point2> points, double pad) {
    if (points.empty()) throw InvalidInput("bounding box of an empty point list");
    Box b{points[0].x, points[0].y, points[0].x, points[0].y};
    for (Point2 p : points) {
        b.xmin = std::min(b.xmin, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.xmax = std::max(b.xmax, p.x);
        b.ymax = std::max(b.ymax, p.y);
    }
    b.xmin -= pad;
    b.ymin -= pad;
    b.xmax += pad;
    b.ymax += pad;
    return b;
}

PointSet::PointSet(std::vector<Point2> points, Box box) : points_(std::move(points)), box_(box) {
    if (!(box_.xmin < box_.xmax) || !(box_.ymin < box_.ymax)) {
        throw InvalidInput("box must have positive width and height");
    }
    if (points_.size() < 3) {
        throw InvalidInput("point pattern needs at least 3 points, got " +
                           std::to_string(points_.size()));
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!is_finite(points_[i])) throw InvalidInput("non-finite point " + std::to_string(i));
        if (!box_.contains(points_[i])) {
            throw InvalidInput("point " + std::to_string(i) + " lies outside the box");
        }
    }

    const double min_sep = 1e-10 * box_.diagonal();
    std::vector<std::size_t> order(points_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points_[a].x < points_[b].x; });
    std::string dupes;
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const Point2 p = points_[order[a]], q = points_[order[b]];
            if (q.x - p.x > min_sep) break;
            if (norm(q - p) <= min_sep) {
                if (!dupes.empty()) dupes += ", ";
                dupes += std::to_string(std::min(order[a], order[b])) + "/" +
                         std::to_string(std::max(order[a], order[b]));
            }
        }
    }
    if (!dupes.empty()) throw InvalidInput("duplicate points: " + dupes);
}

std::vector<Point2> clip_halfplane(std::span<const Point2> convex, Point2 normal, double offset,
                                   double merge_tol) {
    std::vector<Point2> out;
    const std::size_t n = convex.size();
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = convex[i], b = convex[(i + 1) % n];
        const double da = dot(a, normal) - offset;
        const double db = dot(b, normal) - offset;
        if (da <= 0.0) out.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            const double f = da / (da - db);
            out.push_back(a + f * (b - a));
        }
    }
    if (merge_tol > 0.0 && out.size() > 1) {
        std::vector<Point2> merged;
        merged.reserve(out.size());
        for (Point2 p : out) {
            if (merged.empty() || norm(p - merged.back()) > merge_tol) merged.push_back(p);
        }
        while (merged.size() > 1 && norm(merged.front() - merged.back()) <= merge_tol) merged.pop_back();
        out = std::move(merged);
    }
    return out;
}

namespace {

std::vector<Point2> cell_polygon(std::size_t g, std::span<const Point2> gens,
                                 const std::vector<int>& nbrs, std::vector<Point2> start,
                                 double merge_tol) {
    const Point2 p = gens[g];
    for (int k : nbrs) {
        const Point2 q = gens[static_cast<std::size_t>(k)];
        const Point2 normal = q - p;
        const double offset = dot(0.5 * (p + q), normal);
        start = clip_halfplane(start, normal, offset, merge_tol);
        if (start.size() < 3) break;
    }
    return start;
}

bool touches(const std::vector<Point2>& poly, const Box& box, double tol) {
    for (Point2 v : poly) {
        if (v.x - box.xmin <= tol || box.xmax - v.x <= tol || v.y - box.ymin <= tol ||
            box.ymax - v.y <= tol) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<VoronoiCellResult> voronoi_cells(const PointSet& ps, BoundaryPolicy policy, int s_max) {
    const Box& box = ps.box();
    const std::size_t n = ps.size();
    const double merge_tol = 1e-12 * box.diagonal();
    const double touch_tol = 1e-9 * box.diagonal();

    std::vector<Point2> generators(ps.points().begin(), ps.points().end());
    if (policy == BoundaryPolicy::periodic) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!box.strictly_contains(generators[i])) {
                throw InvalidInput("periodic tessellation needs point " + std::to_string(i) +
                                   " strictly inside the box");
            }
        }
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const Point2 shift{dx * box.width(), dy * box.height()};
                for (std::size_t i = 0; i < n; ++i) generators.push_back(ps.points()[i] + shift);
            }
        }
    }

    const Delaunay tri(generators);
    const auto nbrs = tri.neighbors();

    std::vector<VoronoiCellResult> out;
    out.reserve(n);
    for (std::size_t g = 0; g < n; ++g) {
        std::vector<Point2> poly;
        bool border = false;
        if (policy == BoundaryPolicy::periodic) {
            const Box outer{box.xmin - box.width(), box.ymin - box.height(),
                            box.xmax + box.width(), box.ymax + box.height()};
            poly = cell_polygon(g, generators, nbrs[g], outer.corners(), merge_tol);
            if (poly.size() < 3 || touches(poly, outer, touch_tol)) {
                throw DegenerateGeometry("periodic cell of point " + std::to_string(g) +
                                         " is not bounded by its images; too few points");
            }
        } else {
            poly = cell_polygon(g, generators, nbrs[g], box.corners(), merge_tol);
            if (poly.size() < 3) {
                throw DegenerateGeometry("Voronoi cell of point " + std::to_string(g) +
                                         " collapsed");
            }
            border = touches(poly, box, touch_tol);
        }
        Polygon cell(std::move(poly));
        MinkowskiAccumulator metrics = imt_polygon(cell, s_max);
        out.push_back({g, generators[g], std::move(cell), std::move(metrics), border});
    }
    return out;
}

std::vector<VoronoiCellResult> analyze_point_pattern(const PointSet& ps, BoundaryPolicy policy,
                                                     int s_max) {
    auto cells = voronoi_cells(ps, policy, s_max);
    if (policy == BoundaryPolicy::exclude_border) {
        std::erase_if(cells, [](const VoronoiCellResult& c) { return c.is_border; });
    }
    return cells;
}

std::size_t Histogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

Histogram q_histogram(std::span<const VoronoiCellResult> results, int s, int bins,
                      bool include_border) {
    if (bins < 1) throw InvalidInput("histogram needs at least one bin");
    Histogram h;
    h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int k = 0; k <= bins; ++k) h.bin_edges[k] = static_cast<double>(k) / bins;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    std::size_t selected = 0;
    for (const auto& r : results) {
        if (r.is_border && !include_border) continue;
        const double q = r.metrics.msm(s);
        const int bin = std::min(bins - 1, static_cast<int>(q * bins));
        ++h.counts[static_cast<std::size_t>(bin)];
        ++selected;
    }
    if (selected == 0) throw EmptyHistogram("no cells selected for the histogram");
    return h;
}

}  // namespace morpho
