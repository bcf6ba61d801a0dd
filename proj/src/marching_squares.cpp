#include "morpho/marching_squares.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>

#include "morpho/errors.hpp"

namespace morpho {

GreyscaleImage::GreyscaleImage(int width, int height, std::vector<double> values,
                               double pixel_spacing)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width < 1 || height < 1) throw InvalidInput("image dimensions must be positive");
    if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidInput("image has " + std::to_string(values_.size()) + " values, expected " +
                           std::to_string(width) + "x" + std::to_string(height));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw InvalidInput("non-finite pixel value at index " + std::to_string(k));
        }
    }
    set_pixel_spacing(pixel_spacing);
}

GreyscaleImage::GreyscaleImage(int width, int height, double fill, double pixel_spacing)
    : GreyscaleImage(width, height,
                     std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                             static_cast<std::size_t>(std::max(height, 0)),
                                         fill),
                     pixel_spacing) {}

void GreyscaleImage::set_pixel_spacing(double spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw InvalidInput("pixel spacing must be positive and finite");
    }
    spacing_ = spacing;
}

int ms_case(double v00, double v10, double v11, double v01, double t) {
    return (v00 >= t ? 1 : 0) | (v10 >= t ? 2 : 0) | (v11 >= t ? 4 : 0) | (v01 >= t ? 8 : 0);
}

double edge_crossing(double va, double vb, double t) {
    if ((va >= t) == (vb >= t)) {
        throw std::logic_error("edge_crossing: both corners on the same side of the threshold");
    }
    return std::clamp((t - va) / (vb - va), 0.0, 1.0);
}

namespace {

// Corner offsets in counterclockwise order; edge k runs from corner k to
// corner k+1.
constexpr std::array<Point2, 4> kCorner = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

struct CellGeometry {
    std::array<double, 4> v;
    std::array<bool, 4> inside;
    std::array<Point2, 4> crossing;  // valid only on edges with a sign change
};

// Crossing points are interpolated from the lower-index lattice corner to the
// higher one, so neighboring cells sharing an edge get bitwise equal points.
Point2 crossing_on_edge(const CellGeometry& c, int k, double t) {
    const int a = k, b = (k + 1) % 4;
    const bool forward = (k == 0 || k == 1);
    const int lo = forward ? a : b;
    const int hi = forward ? b : a;
    const double f = edge_crossing(c.v[lo], c.v[hi], t);
    const Point2 p = kCorner[lo];
    const Point2 q = kCorner[hi];
    return {p.x + f * (q.x - p.x), p.y + f * (q.y - p.y)};
}

bool connect_saddle(const CellGeometry& c, double t, SaddlePolicy policy) {
    switch (policy) {
        case SaddlePolicy::connect_high: return true;
        case SaddlePolicy::connect_low: return false;
        case SaddlePolicy::mean_of_corners:
        default: return 0.25 * (c.v[0] + c.v[1] + c.v[2] + c.v[3]) >= t;
    }
}

double local_area(std::span<const Point2> poly) { return signed_area(poly); }

// Walks every 2x2 neighborhood and reports oriented contour segments and
// per-neighborhood excursion areas. Coordinates passed to the sink are in
// pixel units; the sink applies the spacing.
template <class Sink>
void march(const GreyscaleImage& img, const MarchingSquaresConfig& cfg, Sink& sink) {
    if (img.width() < 2 || img.height() < 2) {
        throw InvalidInput("image must be at least 2x2 pixels");
    }
    if (!std::isfinite(cfg.threshold)) throw InvalidInput("threshold must be finite");
    const double t = cfg.threshold;
    const int nx = img.width() - 1;
    const int ny = img.height() - 1;

    std::array<Point2, 8> poly{};
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            CellGeometry c;
            c.v = {img(i, j), img(i + 1, j), img(i + 1, j + 1), img(i, j + 1)};
            int mask = 0;
            for (int k = 0; k < 4; ++k) {
                c.inside[k] = c.v[k] >= t;
                mask |= c.inside[k] ? (1 << k) : 0;
            }
            const bool on_frame = (i == 0 || j == 0 || i == nx - 1 || j == ny - 1);
            if (mask == 0) continue;
            const Point2 origin{static_cast<double>(i), static_cast<double>(j)};
            const Point2 center = origin + Point2{0.5, 0.5};
            if (mask == 15) {
                sink.area(1.0, center);
            } else {
                for (int k = 0; k < 4; ++k) {
                    if (c.inside[k] != c.inside[(k + 1) % 4]) c.crossing[k] = crossing_on_edge(c, k, t);
                }
                const bool saddle = (mask == 5 || mask == 10);
                const bool joined = !saddle || connect_saddle(c, t, cfg.saddle_policy);

                double a = 0.0;
                if (joined) {
                    std::size_t n = 0;
                    for (int k = 0; k < 4; ++k) {
                        if (c.inside[k]) poly[n++] = kCorner[k];
                        if (c.inside[k] != c.inside[(k + 1) % 4]) poly[n++] = c.crossing[k];
                    }
                    a = local_area(std::span<const Point2>(poly.data(), n));
                } else {
                    for (int k = 0; k < 4; ++k) {
                        if (!c.inside[k]) continue;
                        const std::array<Point2, 3> tri = {kCorner[k], c.crossing[k],
                                                           c.crossing[(k + 3) % 4]};
                        a += local_area(tri);
                    }
                }
                sink.area(a, center);

                for (int k = 0; k < 4; ++k) {
                    const int next = (k + 1) % 4;
                    if (!(c.inside[k] && !c.inside[next])) continue;  // not an exit edge
                    int entry = (k + 3) % 4;
                    if (joined) {
                        entry = next;
                        while (!(!c.inside[entry] && c.inside[(entry + 1) % 4])) entry = (entry + 1) % 4;
                    }
                    sink.segment(origin + c.crossing[k], origin + c.crossing[entry]);
                }
            }

            if (cfg.close_border && on_frame) {
                const std::array<bool, 4> frame_edge = {j == 0, i == nx - 1, j == ny - 1, i == 0};
                for (int k = 0; k < 4; ++k) {
                    if (!frame_edge[k]) continue;
                    const int next = (k + 1) % 4;
                    if (!c.inside[k] && !c.inside[next]) continue;
                    Point2 p0 = kCorner[k], p1 = kCorner[next];
                    if (c.inside[k] != c.inside[next]) {
                        const Point2 x = crossing_on_edge(c, k, t);
                        if (c.inside[k]) p1 = x; else p0 = x;
                    }
                    sink.segment(origin + p0, origin + p1);
                }
            }
        }
    }
}

struct GlobalSink {
    MinkowskiAccumulator acc;
    double spacing;

    void segment(Point2 p0, Point2 p1) { acc.add_boundary_segment(spacing * p0, spacing * p1); }
    void area(double a, Point2) { acc.add_area(a * spacing * spacing); }
};

struct MapSink {
    MinkowskiMapGrid& grid;
    double spacing;

    void segment(Point2 p0, Point2 p1) {
        const auto [col, row] = grid.locate(0.5 * (p0 + p1));
        grid.cell(col, row).add_boundary_segment(spacing * p0, spacing * p1);
    }
    void area(double a, Point2 center) {
        const auto [col, row] = grid.locate(center);
        grid.cell(col, row).add_area(a * spacing * spacing);
    }
};

struct SegmentSink {
    std::vector<Segment> segments;
    double spacing;

    void segment(Point2 p0, Point2 p1) { segments.push_back({spacing * p0, spacing * p1}); }
    void area(double, Point2) {}
};

}  // namespace

std::vector<Segment> contour_segments(const GreyscaleImage& img, const MarchingSquaresConfig& cfg) {
    SegmentSink sink{{}, img.pixel_spacing()};
    march(img, cfg, sink);
    return std::move(sink.segments);
}

MinkowskiAccumulator imt_interpolated_marching_squares(const GreyscaleImage& img,
                                                       const MarchingSquaresConfig& cfg) {
    GlobalSink sink{MinkowskiAccumulator(cfg.s_max), img.pixel_spacing()};
    march(img, cfg, sink);
    return std::move(sink.acc);
}

std::vector<std::pair<double, MinkowskiAccumulator>> threshold_sweep(
    const GreyscaleImage& img, std::span<const double> thresholds,
    const MarchingSquaresConfig& base, bool parallel) {
    if (thresholds.empty()) throw InvalidInput("threshold list is empty");
    auto run_one = [&](double t) {
        MarchingSquaresConfig cfg = base;
        cfg.threshold = t;
        return imt_interpolated_marching_squares(img, cfg);
    };

    std::vector<std::pair<double, MinkowskiAccumulator>> out;
    out.reserve(thresholds.size());
    if (!parallel || thresholds.size() == 1) {
        for (double t : thresholds) out.emplace_back(t, run_one(t));
        return out;
    }

    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), thresholds.size()));
    std::vector<std::optional<MinkowskiAccumulator>> results(thresholds.size());
    std::vector<std::future<void>> jobs;
    jobs.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t k = w; k < thresholds.size(); k += workers) {
                results[k] = run_one(thresholds[k]);
            }
        }));
    }
    for (auto& job : jobs) job.get();  // rethrows the first failure
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        out.emplace_back(thresholds[k], std::move(*results[k]));
    }
    return out;
}

MinkowskiMapGrid::MinkowskiMapGrid(int cols, int rows, double cell_size, int s_max)
    : cols_(cols), rows_(rows), cell_size_(cell_size) {
    if (cols < 1 || rows < 1) throw InvalidInput("grid needs at least one column and one row");
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
        throw InvalidInput("grid cell size must be positive");
    }
    cells_.assign(static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows),
                  MinkowskiAccumulator(s_max));
}

std::pair<int, int> MinkowskiMapGrid::locate(Point2 p) const {
    const int col = std::clamp(static_cast<int>(std::floor(p.x / cell_size_)), 0, cols_ - 1);
    const int row = std::clamp(static_cast<int>(std::floor(p.y / cell_size_)), 0, rows_ - 1);
    return {col, row};
}

MinkowskiAccumulator MinkowskiMapGrid::merged() const {
    MinkowskiAccumulator total(cells_.front().s_max());
    for (const auto& c : cells_) total += c;
    return total;
}

MinkowskiMapGrid minkowski_map(const GreyscaleImage& img, const MarchingSquaresConfig& cfg,
                               const MapGridSpec& spec) {
    if (spec.cols < 1 || spec.rows < 1) throw InvalidInput("grid needs at least one column and one row");
    const double span_x = img.width() - 1;
    const double span_y = img.height() - 1;
    const double size =
        spec.cell_size.value_or(std::max(span_x / spec.cols, span_y / spec.rows));
    if (spec.cols * size < span_x || spec.rows * size < span_y) {
        throw InvalidInput("grid " + std::to_string(spec.cols) + "x" + std::to_string(spec.rows) +
                           " with cell size " + std::to_string(size) +
                           " does not cover the image");
    }
    MinkowskiMapGrid grid(spec.cols, spec.rows, size, cfg.s_max);
    MapSink sink{grid, img.pixel_spacing()};
    march(img, cfg, sink);
    return grid;
}

}  // namespace morpho
