#include "morpho/accumulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "morpho/errors.hpp"

namespace morpho {

MinkowskiAccumulator::MinkowskiAccumulator(int s_max) {
    if (s_max < 2) throw InvalidInput("s_max must be at least 2, got " + std::to_string(s_max));
    psi_.assign(static_cast<std::size_t>(s_max) + 1, Complex{});
}

void MinkowskiAccumulator::add_normal(double length, Complex normal) {
    perimeter_ += length;
    // psi_0 is accumulated from the same addends as the perimeter, so the
    // two stay bitwise identical.
    psi_[0] += Complex{length, 0.0};
    Complex power = normal;
    for (std::size_t s = 1; s < psi_.size(); ++s) {
        psi_[s] += length * power;
        power *= normal;
    }
}

void MinkowskiAccumulator::add_boundary_segment(Point2 p0, Point2 p1) {
    if (!is_finite(p0) || !is_finite(p1)) throw InvalidInput("non-finite segment coordinate");
    const Point2 d = p1 - p0;
    const double length = norm(d);
    if (length < kMinSegmentLength) return;
    add_normal(length, Complex{d.y / length, -d.x / length});
}

void MinkowskiAccumulator::add_segment(Point2 p0, Point2 p1) {
    if (!is_finite(p0) || !is_finite(p1)) throw InvalidInput("non-finite segment coordinate");
    const Point2 d = p1 - p0;
    const double length = norm(d);
    if (length < kMinSegmentLength) return;
    area_ += 0.5 * cross(p0, p1);
    add_normal(length, Complex{d.y / length, -d.x / length});
}

MinkowskiAccumulator& MinkowskiAccumulator::operator+=(const MinkowskiAccumulator& other) {
    if (other.psi_.size() != psi_.size()) {
        throw InvalidInput("cannot merge accumulators with s_max " + std::to_string(s_max()) +
                           " and " + std::to_string(other.s_max()));
    }
    area_ += other.area_;
    perimeter_ += other.perimeter_;
    for (std::size_t s = 0; s < psi_.size(); ++s) psi_[s] += other.psi_[s];
    return *this;
}

Complex MinkowskiAccumulator::imt(int s) const {
    if (s < 0 || s > s_max()) {
        throw RangeError("tensor rank " + std::to_string(s) + " outside 0.." +
                         std::to_string(s_max()));
    }
    return psi_[static_cast<std::size_t>(s)];
}

double MinkowskiAccumulator::msm(int s) const {
    const Complex psi = imt(s);
    if (!(perimeter_ > 0.0)) throw UndefinedMetric("q_s undefined for zero perimeter");
    return std::clamp(std::abs(psi) / perimeter_, 0.0, 1.0);
}

double MinkowskiAccumulator::preferred_direction(int s) const {
    if (s < 1) throw NoDirection("preferred direction needs s >= 1");
    const Complex psi = imt(s);
    if (!(std::abs(psi) > 1e-12 * perimeter_)) {
        throw NoDirection("Psi_" + std::to_string(s) + " vanishes; no preferred direction");
    }
    const double period = 2.0 * std::numbers::pi / s;
    double dir = std::arg(psi) / s;
    dir = std::fmod(dir, period);
    if (dir < 0.0) dir += period;
    if (dir >= period) dir -= period;
    return dir;
}

bool MinkowskiAccumulator::is_closed(double tol) const {
    return std::abs(psi_[1]) <= tol * std::max(perimeter_, 1.0);
}

MinkowskiAccumulator merge(const MinkowskiAccumulator& a, const MinkowskiAccumulator& b) {
    MinkowskiAccumulator out = a;
    out += b;
    return out;
}

MinkowskiAccumulator imt_polygon(const Polygon& poly, int s_max) {
    MinkowskiAccumulator acc(s_max);
    const auto v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) acc.add_segment(v[i], v[(i + 1) % v.size()]);
    return acc;
}

MinkowskiAccumulator imt_polygon(std::span<const Point2> vertices, int s_max) {
    return imt_polygon(Polygon(std::vector<Point2>(vertices.begin(), vertices.end())), s_max);
}

}  // namespace morpho
