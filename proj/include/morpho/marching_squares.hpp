#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "morpho/accumulator.hpp"

namespace morpho {

/// Single-channel raster. Pixel (col, row) has its center at
/// (col * spacing, row * spacing); the analyzed domain is the dual lattice
/// [0, width-1] x [0, height-1] spanned by the pixel centers.
class GreyscaleImage {
public:
    GreyscaleImage() = default;
    // Throws InvalidInput for size mismatches, non-finite values or
    // non-positive spacing.
    GreyscaleImage(int width, int height, std::vector<double> values, double pixel_spacing = 1.0);
    // Image filled with a constant.
    GreyscaleImage(int width, int height, double fill = 0.0, double pixel_spacing = 1.0);

    int width() const { return width_; }
    int height() const { return height_; }
    double pixel_spacing() const { return spacing_; }
    std::span<const double> values() const { return values_; }

    double operator()(int col, int row) const {
        return values_[static_cast<std::size_t>(row) * width_ + col];
    }
    double& at(int col, int row) { return values_[static_cast<std::size_t>(row) * width_ + col]; }

    void set_pixel_spacing(double spacing);

private:
    int width_ = 0;
    int height_ = 0;
    double spacing_ = 1.0;
    std::vector<double> values_;
};

enum class SaddlePolicy {
    mean_of_corners,  // connect the above-threshold corners iff the 4-corner mean >= t
    connect_high,     // always connect the above-threshold corners
    connect_low,      // always separate them
};

struct MarchingSquaresConfig {
    double threshold = 0.5;
    SaddlePolicy saddle_policy = SaddlePolicy::mean_of_corners;
    int s_max = kDefaultSMax;
    // Synthesize segments along the image frame so excursion regions that
    // touch the border yield closed contours.
    bool close_border = false;
};

/// Case index of a 2x2 neighborhood. Bit 0: v00 = (i, j), bit 1: v10 =
/// (i+1, j), bit 2: v11 = (i+1, j+1), bit 3: v01 = (i, j+1). A bit is set
/// when the corner value is >= t. Cases 5 and 10 are the saddles.
int ms_case(double v00, double v10, double v11, double v01, double t);

/// Fractional position of the threshold crossing along A -> B, clamped to
/// [0, 1]. Throws std::logic_error when both corners lie on the same side.
double edge_crossing(double va, double vb, double t);

/// Tensors of the excursion set {value >= threshold}: interpolated
/// iso-contours are oriented with the excursion set on their left, and area
/// is the exact polygonal area of the excursion set inside each 2x2 cell.
/// Throws InvalidInput for images smaller than 2x2.
MinkowskiAccumulator imt_interpolated_marching_squares(const GreyscaleImage& img,
                                                       const MarchingSquaresConfig& cfg);

struct Segment {
    Point2 from;
    Point2 to;
};

// The oriented contour segments (physical units) that
// imt_interpolated_marching_squares accumulates, in raster order.
std::vector<Segment> contour_segments(const GreyscaleImage& img, const MarchingSquaresConfig& cfg);

// One accumulator per threshold, in input order. Thresholds run
// concurrently when parallel is set.
std::vector<std::pair<double, MinkowskiAccumulator>> threshold_sweep(
    const GreyscaleImage& img, std::span<const double> thresholds,
    const MarchingSquaresConfig& base, bool parallel = true);

struct MapGridSpec {
    int cols = 1;
    int rows = 1;
    // In pixels. When unset, the smallest size covering the image is used.
    std::optional<double> cell_size;
};

class MinkowskiMapGrid {
public:
    MinkowskiMapGrid(int cols, int rows, double cell_size, int s_max);

    int cols() const { return cols_; }
    int rows() const { return rows_; }
    double cell_size() const { return cell_size_; }

    const MinkowskiAccumulator& cell(int col, int row) const {
        return cells_[static_cast<std::size_t>(row) * cols_ + col];
    }
    MinkowskiAccumulator& cell(int col, int row) {
        return cells_[static_cast<std::size_t>(row) * cols_ + col];
    }
    std::span<const MinkowskiAccumulator> cells() const { return cells_; }

    // Index of the grid cell containing a point given in pixel units.
    std::pair<int, int> locate(Point2 pixel_pos) const;

    MinkowskiAccumulator merged() const;

private:
    int cols_;
    int rows_;
    double cell_size_;
    std::vector<MinkowskiAccumulator> cells_;
};

/// Space-resolved analysis: every contour segment goes to the grid cell
/// containing its midpoint, and the excursion area of each 2x2 neighborhood
/// goes to the grid cell containing the neighborhood center. Merging all
/// grid cells reproduces imt_interpolated_marching_squares.
/// Throws InvalidInput when the grid does not cover the image.
MinkowskiMapGrid minkowski_map(const GreyscaleImage& img, const MarchingSquaresConfig& cfg,
                               const MapGridSpec& grid);

}  // namespace morpho
