#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fixtures.hpp"
#include "morpho/errors.hpp"
#include "morpho/marching_squares.hpp"

using namespace morpho;
using std::numbers::pi;

namespace {

MarchingSquaresConfig at(double t, bool close_border = false) {
    MarchingSquaresConfig cfg;
    cfg.threshold = t;
    cfg.close_border = close_border;
    return cfg;
}

GreyscaleImage flipped_lr(const GreyscaleImage& img) {
    GreyscaleImage out(img.width(), img.height(), 0.0, img.pixel_spacing());
    for (int j = 0; j < img.height(); ++j)
        for (int i = 0; i < img.width(); ++i) out.at(img.width() - 1 - i, j) = img(i, j);
    return out;
}

// Filled ellipses on a zero background, 1 inside; none touches the frame.
GreyscaleImage binary_blobs() {
    GreyscaleImage img(80, 60, 0.0);
    struct E { double cx, cy, a, b; };
    for (const E e : {E{20, 20, 10, 6}, E{55, 35, 12, 15}, E{20, 45, 5, 5}}) {
        for (int j = 0; j < img.height(); ++j)
            for (int i = 0; i < img.width(); ++i)
                if (std::pow((i - e.cx) / e.a, 2) + std::pow((j - e.cy) / e.b, 2) <= 1.0) img.at(i, j) = 1.0;
    }
    return img;
}

double shoelace(const std::vector<Segment>& segs) {
    double a = 0.0;
    for (const auto& s : segs) a += 0.5 * cross(s.from, s.to);
    return a;
}

}  // namespace

TEST_CASE("ms_case dispatch") {
    CHECK(ms_case(0, 0, 0, 0, 0.5) == 0);
    CHECK(ms_case(1, 1, 1, 1, 0.5) == 15);
    CHECK(ms_case(1, 0, 1, 0, 0.5) == 5);
    CHECK(ms_case(0, 1, 0, 1, 0.5) == 10);
    CHECK(ms_case(0.5, 0, 0, 0, 0.5) == 1);  // closed excursion set: >= t
    CHECK(ms_case(0, 0, 0, 0.7, 0.5) == 8);
}

TEST_CASE("edge_crossing interpolation") {
    CHECK(edge_crossing(0, 1, 0.5) == 0.5);
    CHECK(edge_crossing(0, 1, 0.25) == 0.25);
    CHECK(edge_crossing(1, 0, 0.25) == 0.75);
    CHECK(edge_crossing(0, 1, 1.0) == 1.0);
    CHECK_THROWS_AS(edge_crossing(0, 0.2, 0.5), std::logic_error);
    CHECK_THROWS_AS(edge_crossing(0.6, 0.9, 0.5), std::logic_error);
}

TEST_CASE("image validation") {
    CHECK_THROWS_AS(GreyscaleImage(2, 2, std::vector<double>{1, 2, 3}), InvalidInput);
    CHECK_THROWS_AS(GreyscaleImage(2, 2, std::vector<double>{1, 2, 3, NAN}), InvalidInput);
    CHECK_THROWS_AS(GreyscaleImage(2, 2, 0.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(imt_interpolated_marching_squares(GreyscaleImage(1, 5, 0.0), at(0.5)), InvalidInput);
    CHECK_THROWS_AS(imt_interpolated_marching_squares(GreyscaleImage(3, 3, 0.0), at(NAN)), InvalidInput);
}

TEST_CASE("constant image below threshold is empty") {
    const auto acc = imt_interpolated_marching_squares(GreyscaleImage(10, 10, 0.0), at(0.5));
    CHECK(acc.area() == 0.0);
    CHECK(acc.perimeter() == 0.0);
}

TEST_CASE("threshold below the minimum covers the dual lattice") {
    GreyscaleImage img = fixtures::ramp_disc(20, 5);
    img.set_pixel_spacing(0.5);
    const auto acc = imt_interpolated_marching_squares(img, at(-1.0));
    CHECK(acc.area() == doctest::Approx(19 * 19 * 0.25).epsilon(1e-14));
    CHECK(acc.perimeter() == 0.0);
    const auto closed = imt_interpolated_marching_squares(img, at(-1.0, true));
    CHECK(closed.perimeter() == doctest::Approx(4 * 19 * 0.5).epsilon(1e-14));
    CHECK(closed.is_closed());
}

TEST_CASE("single pixel: hand-traced diamond") {
    // The four cells around pixel (2,2) each cut off a corner triangle with
    // legs 1/2; the contour joins the edge midpoints (2,1.5), (2.5,2), (2,2.5),
    // (1.5,2). Each piece has length sqrt(2)/2 and outward normal at
    // 45 + k*90 degrees.
    const auto img = fixtures::single_pixel(5, 5, 2, 2);
    const auto acc = imt_interpolated_marching_squares(img, at(0.5));
    CHECK(std::abs(acc.area() - 0.5) <= 1e-12);
    CHECK(std::abs(acc.perimeter() - 2 * std::sqrt(2.0)) <= 1e-12);
    CHECK(std::abs(acc.msm(4) - 1.0) <= 1e-12);
    CHECK(std::abs(acc.imt(1)) <= 1e-12);
    CHECK(acc.msm(2) <= 1e-12);
    CHECK(acc.msm(3) <= 1e-12);
    CHECK(std::abs(acc.preferred_direction(4) - pi / 4) <= 1e-12);

    const auto segs = contour_segments(img, at(0.5));
    CHECK(segs.size() == 4);
    CHECK(std::abs(shoelace(segs) - 0.5) <= 1e-12);
}

TEST_CASE("pixel spacing scales lengths and areas") {
    auto img = fixtures::single_pixel(5, 5, 2, 2);
    img.set_pixel_spacing(3.0);
    const auto acc = imt_interpolated_marching_squares(img, at(0.5));
    CHECK(acc.area() == doctest::Approx(4.5).epsilon(1e-14));
    CHECK(acc.perimeter() == doctest::Approx(6 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("saddle policies") {
    // v00 = v11 = 1, v10 = v01 = 0: crossings at edge midpoints.
    const GreyscaleImage img(2, 2, std::vector<double>{1, 0, 0, 1});
    auto cfg = at(0.5);
    const double joined = 1.0 - 2 * 0.125;
    const double split = 2 * 0.125;
    CHECK(imt_interpolated_marching_squares(img, cfg).area() == doctest::Approx(joined));  // mean 0.5 >= t
    cfg.threshold = 0.6;
    CHECK(imt_interpolated_marching_squares(img, cfg).area() ==
          doctest::Approx(2 * 0.5 * 0.4 * 0.4));  // mean below t: separated
    cfg.threshold = 0.5;
    cfg.saddle_policy = SaddlePolicy::connect_low;
    CHECK(imt_interpolated_marching_squares(img, cfg).area() == doctest::Approx(split));
    cfg.saddle_policy = SaddlePolicy::connect_high;
    CHECK(imt_interpolated_marching_squares(img, cfg).area() == doctest::Approx(joined));

    for (auto policy : {SaddlePolicy::connect_low, SaddlePolicy::connect_high}) {
        cfg.saddle_policy = policy;
        cfg.close_border = true;
        const auto acc = imt_interpolated_marching_squares(img, cfg);
        CHECK(acc.is_closed());
        CHECK(shoelace(contour_segments(img, cfg)) == doctest::Approx(acc.area()).epsilon(1e-14));
    }
}

TEST_CASE("ramp disc matches the analytic circle") {
    // contour at r = R/2 = 40
    const auto acc = imt_interpolated_marching_squares(fixtures::ramp_disc(256, 80), at(0.5));
    const double r = 40.0;
    CHECK(std::abs(acc.area() / (pi * r * r) - 1.0) < 0.005);
    CHECK(std::abs(acc.perimeter() / (2 * pi * r) - 1.0) < 0.005);
    for (int s = 2; s <= 8; ++s) CHECK(acc.msm(s) <= 0.02);
    CHECK(std::abs(acc.imt(1)) <= 1e-9 * acc.perimeter());
}

TEST_CASE("resolution convergence on the ramp disc") {
    double prev_area = 1.0, prev_perim = 1.0;
    for (int n : {64, 128, 256}) {
        GreyscaleImage img = fixtures::ramp_disc(n, 80.0 * n / 256.0);
        img.set_pixel_spacing(256.0 / n);
        const auto acc = imt_interpolated_marching_squares(img, at(0.5));
        const double ea = std::abs(acc.area() / (pi * 1600.0) - 1.0);
        const double ep = std::abs(acc.perimeter() / (2 * pi * 40.0) - 1.0);
        CAPTURE(n);
        CHECK(ea < prev_area);
        CHECK(ep < prev_perim);
        prev_area = ea;
        prev_perim = ep;
    }
}

TEST_CASE("area from cell pieces equals the shoelace of closed contours") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto img = fixtures::gaussian_field(40, 30, 2.5, 2.5, seed);
        for (double t : {-1.0, -0.2, 0.0, 0.7}) {
            for (auto policy : {SaddlePolicy::mean_of_corners, SaddlePolicy::connect_high,
                                SaddlePolicy::connect_low}) {
                auto cfg = at(t, true);
                cfg.saddle_policy = policy;
                const auto acc = imt_interpolated_marching_squares(img, cfg);
                CHECK(acc.is_closed(1e-9));
                CHECK(std::abs(shoelace(contour_segments(img, cfg)) - acc.area()) <= 1e-9 * 39 * 29);
            }
        }
    }
}

TEST_CASE("border-touching excursion sets give open contours unless closed") {
    CHECK(imt_interpolated_marching_squares(fixtures::ramp_disc(40, 30), at(0.5)).is_closed(1e-9));
    // left-to-right ramp: the excursion set x <= 10 is cut by three frame sides
    GreyscaleImage img(30, 20, 0.0);
    for (int j = 0; j < 20; ++j)
        for (int i = 0; i < 30; ++i) img.at(i, j) = 1.0 - i / 20.0;
    const auto open = imt_interpolated_marching_squares(img, at(0.5));
    CHECK(open.perimeter() == doctest::Approx(19.0));
    CHECK_FALSE(open.is_closed(1e-9));
    const auto closed = imt_interpolated_marching_squares(img, at(0.5, true));
    CHECK(closed.perimeter() == doctest::Approx(2 * 19.0 + 2 * 10.0));
    CHECK(closed.area() == doctest::Approx(190.0));
    CHECK(closed.is_closed(1e-9));
    CHECK(closed.area() == open.area());
    CHECK(closed.perimeter() > open.perimeter());
}

TEST_CASE("interior contours close") {
    const auto acc = imt_interpolated_marching_squares(binary_blobs(), at(0.5));
    CHECK(std::abs(acc.imt(1)) <= 1e-9 * acc.perimeter());
}

TEST_CASE("mirror symmetry conjugates the tensors") {
    const auto img = fixtures::gaussian_field(50, 40, 3.0, 1.5, 11);
    const auto a = imt_interpolated_marching_squares(img, at(0.3));
    const auto b = imt_interpolated_marching_squares(flipped_lr(img), at(0.3));
    CHECK(b.perimeter() == doctest::Approx(a.perimeter()).epsilon(1e-12));
    for (int s = 1; s <= 12; ++s) {
        const Complex expected = (s % 2 ? -1.0 : 1.0) * std::conj(a.imt(s));
        CHECK(std::abs(b.imt(s) - expected) <= 1e-9 * a.perimeter());
        CHECK(std::abs(b.msm(s) - a.msm(s)) <= 1e-12);
    }
}

TEST_CASE("complement of a binary image") {
    const auto img = binary_blobs();
    GreyscaleImage neg = img;
    for (int j = 0; j < img.height(); ++j)
        for (int i = 0; i < img.width(); ++i) neg.at(i, j) = -img(i, j);
    const auto a = imt_interpolated_marching_squares(img, at(0.5));
    const auto b = imt_interpolated_marching_squares(neg, at(-0.5));
    CHECK(std::abs(a.perimeter() - b.perimeter()) <= 1e-9);
    for (int s = 2; s <= 12; ++s) CHECK(std::abs(a.msm(s) - b.msm(s)) <= 1e-9);
    CHECK(a.area() + b.area() == doctest::Approx(79.0 * 59.0));
}

TEST_CASE("threshold sweep") {
    const auto img = fixtures::ramp_disc(64, 25);
    const std::vector<double> ts = {0.3, 0.6};
    const auto sweep = threshold_sweep(img, ts, {}, true);
    REQUIRE(sweep.size() == 2);
    CHECK(sweep[0].first == 0.3);
    CHECK(sweep[1].first == 0.6);
    CHECK(sweep[0].second.area() > sweep[1].second.area());

    const std::vector<double> many = {0.9, 0.1, 0.5, 0.2, 0.8, 0.4, 0.7};
    const auto par = threshold_sweep(img, many, {}, true);
    const auto ser = threshold_sweep(img, many, {}, false);
    for (std::size_t k = 0; k < many.size(); ++k) {
        CHECK(par[k].first == many[k]);
        CHECK(par[k].second == ser[k].second);
    }
    const auto empty = threshold_sweep(GreyscaleImage(8, 8, 0.0), ts, {}, true);
    CHECK(empty[0].second.empty());
    CHECK(empty[1].second.empty());
    CHECK_THROWS_AS(threshold_sweep(img, std::vector<double>{}, {}, true), InvalidInput);
}

TEST_CASE("minkowski map merges back to the global accumulator") {
    const auto img = fixtures::gaussian_field(61, 47, 2.0, 4.0, 3);
    const auto cfg = at(0.25);
    const auto global = imt_interpolated_marching_squares(img, cfg);
    for (auto [c, r] : {std::pair{1, 1}, std::pair{3, 3}, std::pair{7, 5}, std::pair{60, 46}}) {
        const auto grid = minkowski_map(img, cfg, {c, r, std::nullopt});
        const auto m = grid.merged();
        CHECK(std::abs(m.area() - global.area()) <= 1e-12 * global.area());
        CHECK(std::abs(m.perimeter() - global.perimeter()) <= 1e-12 * global.perimeter());
        for (int s = 0; s <= 12; ++s) CHECK(std::abs(m.imt(s) - global.imt(s)) <= 1e-12 * global.perimeter());
    }
    const auto one = minkowski_map(img, cfg, {1, 1, std::nullopt});
    CHECK(one.cell(0, 0) == global);
}

TEST_CASE("minkowski map of the disc resolves local arcs") {
    const auto grid = minkowski_map(fixtures::ramp_disc(256, 80), at(0.5), {4, 4, std::nullopt});
    const double c = 127.5;
    // Corner cells lie outside the circle.
    CHECK(grid.cell(0, 0).empty());
    CHECK(grid.cell(3, 3).empty());
    for (int row = 1; row <= 2; ++row) {
        for (int col = 1; col <= 2; ++col) {
            const auto& acc = grid.cell(col, row);
            // a quarter arc: |psi_2| / P = r / (r pi / 2)
            CHECK(acc.msm(2) > 0.5);
            CHECK(acc.msm(2) == doctest::Approx(2.0 / pi).epsilon(0.01));
            // direction follows the outward normal at the arc midpoint
            const double cx = (col + 0.5) * grid.cell_size() - c;
            const double cy = (row + 0.5) * grid.cell_size() - c;
            double radial = std::fmod(std::atan2(cy, cx) + 2 * pi, pi);
            double d = std::abs(acc.preferred_direction(2) - radial);
            d = std::min(d, pi - d);
            CHECK(d < 0.02);
        }
    }
}

TEST_CASE("minkowski map validation") {
    const auto img = fixtures::ramp_disc(33, 10);
    CHECK_THROWS_AS(minkowski_map(img, at(0.5), {2, 2, 10.0}), InvalidInput);
    CHECK_NOTHROW(minkowski_map(img, at(0.5), {2, 2, 16.0}));
    CHECK_THROWS_AS(minkowski_map(img, at(0.5), {0, 2, std::nullopt}), InvalidInput);
    const auto g = minkowski_map(img, at(0.5), {2, 2, 16.0});
    CHECK(g.locate({100.0, -5.0}) == std::pair{1, 0});
}
