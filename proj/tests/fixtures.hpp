#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "morpho/geometry.hpp"
#include "morpho/marching_squares.hpp"

namespace fixtures {

using morpho::GreyscaleImage;
using morpho::Point2;

// Independent oracle: sum of L * (cos(s phi) + i sin(s phi)) with phi the
// outward-normal angle from atan2, over the closed vertex loop.
std::complex<double> psi_oracle(std::span<const Point2> loop, int s);
double perimeter_oracle(std::span<const Point2> loop);

// v = clamp(1 - r / radius) around the image center, N x N pixels.
GreyscaleImage ramp_disc(int n, double radius);

// Zeros with a single 1 at (col, row).
GreyscaleImage single_pixel(int width, int height, int col, int row);

// Seeded white noise smoothed by a separable Gaussian with standard
// deviations sigma_x, sigma_y (pixels), then standardized to zero mean and
// unit variance.
GreyscaleImage gaussian_field(int width, int height, double sigma_x, double sigma_y,
                              std::uint64_t seed);

std::vector<Point2> triangular_lattice(int cols, int rows, double spacing = 1.0);
std::vector<Point2> square_lattice(int cols, int rows, double spacing = 1.0);
std::vector<Point2> uniform_points(int n, double xmin, double ymin, double xmax, double ymax,
                                   std::uint64_t seed);

// Star-shaped polygon around the origin: random radii in [rmin, rmax] at
// sorted random angles. Simple and counterclockwise by construction.
std::vector<Point2> random_star_polygon(int n, double rmin, double rmax, std::uint64_t seed);

// Per-test scratch directory, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& text);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::string read_file(const std::filesystem::path& path);

// 8-bit greyscale PNG of an image with values in [0, 1].
std::vector<std::uint8_t> to_png8(const GreyscaleImage& img);

}  // namespace fixtures
