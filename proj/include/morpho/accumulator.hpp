#pragma once

#include <complex>
#include <vector>

#include "morpho/geometry.hpp"

namespace morpho {

using Complex = std::complex<double>;

inline constexpr int kDefaultSMax = 12;

// Segments shorter than this are ignored by add_segment.
inline constexpr double kMinSegmentLength = 1e-14;

/// Running sums over oriented boundary segments: area, perimeter and the
/// complex coefficients
///
///     psi_s = sum over segments of  L * exp(i * s * phi)
///
/// where L is the segment length and phi the angle of its outward normal.
/// Segments are oriented with the interior on their left, so the outward
/// normal is the segment direction rotated by -90 degrees.
///
/// Accumulators are plain values. Build them independently and combine
/// with merge().
class MinkowskiAccumulator {
public:
    explicit MinkowskiAccumulator(int s_max = kDefaultSMax);

    int s_max() const { return static_cast<int>(psi_.size()) - 1; }

    // Adds the oriented segment p0 -> p1 including its shoelace area term.
    // Throws InvalidInput on non-finite coordinates.
    void add_segment(Point2 p0, Point2 p1);

    // Adds only the boundary contribution (perimeter and psi) of p0 -> p1.
    // Used by pipelines that account for area separately.
    void add_boundary_segment(Point2 p0, Point2 p1);

    void add_area(double a) { area_ += a; }

    // Fieldwise sum. Throws InvalidInput when s_max differs.
    MinkowskiAccumulator& operator+=(const MinkowskiAccumulator& other);

    // Only meaningful once every contour is closed; for open segment
    // collections this is the origin-dependent shoelace sum.
    double area() const { return area_; }
    double perimeter() const { return perimeter_; }
    bool empty() const { return perimeter_ == 0.0 && area_ == 0.0; }

    // Psi_s. Throws RangeError unless 0 <= s <= s_max.
    Complex imt(int s) const;

    // q_s = |Psi_s| / perimeter, clamped to [0, 1].
    // Throws UndefinedMetric for zero perimeter, RangeError for bad s.
    double msm(int s) const;

    // arg(Psi_s) / s reduced into [0, 2 pi / s).
    // Throws NoDirection when |Psi_s| <= 1e-12 * perimeter or s < 1.
    double preferred_direction(int s) const;

    // True when |Psi_1| <= tol * max(perimeter, 1), i.e. the normals of all
    // added segments integrate to zero as they do for closed contours.
    bool is_closed(double tol = 1e-12) const;

    friend bool operator==(const MinkowskiAccumulator&, const MinkowskiAccumulator&) = default;

private:
    void add_normal(double length, Complex normal);

    double area_ = 0.0;
    double perimeter_ = 0.0;
    std::vector<Complex> psi_;
};

MinkowskiAccumulator merge(const MinkowskiAccumulator& a, const MinkowskiAccumulator& b);

// Free-function accessors mirroring the member API.
inline double area(const MinkowskiAccumulator& acc) { return acc.area(); }
inline double perimeter(const MinkowskiAccumulator& acc) { return acc.perimeter(); }
inline Complex imt(const MinkowskiAccumulator& acc, int s) { return acc.imt(s); }
inline double msm(const MinkowskiAccumulator& acc, int s) { return acc.msm(s); }
inline double preferred_direction(const MinkowskiAccumulator& acc, int s) {
    return acc.preferred_direction(s);
}

/// Minkowski tensors of a closed simple counterclockwise polygon: the fold of
/// add_segment over all edges, including the closing edge.
MinkowskiAccumulator imt_polygon(const Polygon& poly, int s_max = kDefaultSMax);

// Same for a raw counterclockwise vertex list; validates like Polygon.
MinkowskiAccumulator imt_polygon(std::span<const Point2> vertices, int s_max = kDefaultSMax);

}  // namespace morpho
