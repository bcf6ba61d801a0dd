#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unistd.h>

#include "morpho/io.hpp"

namespace fixtures {

std::complex<double> psi_oracle(std::span<const Point2> loop, int s) {
    std::complex<double> sum{};
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Point2 a = loop[i], b = loop[(i + 1) % loop.size()];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        const double phi = std::atan2(b.y - a.y, b.x - a.x) - std::numbers::pi / 2;
        sum += len * std::complex<double>(std::cos(s * phi), std::sin(s * phi));
    }
    return sum;
}

double perimeter_oracle(std::span<const Point2> loop) {
    double p = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Point2 a = loop[i], b = loop[(i + 1) % loop.size()];
        p += std::hypot(b.x - a.x, b.y - a.y);
    }
    return p;
}

GreyscaleImage ramp_disc(int n, double radius) {
    GreyscaleImage img(n, n, 0.0);
    const double c = 0.5 * (n - 1);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double r = std::hypot(i - c, j - c);
            img.at(i, j) = std::clamp(1.0 - r / radius, 0.0, 1.0);
        }
    }
    return img;
}

GreyscaleImage single_pixel(int width, int height, int col, int row) {
    GreyscaleImage img(width, height, 0.0);
    img.at(col, row) = 1.0;
    return img;
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    const int r = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> k(2 * r + 1);
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) sum += k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
    for (auto& v : k) v /= sum;
    return k;
}

}  // namespace

GreyscaleImage gaussian_field(int width, int height, double sigma_x, double sigma_y,
                              std::uint64_t seed) {
    // Periodic convolution of white noise keeps the field statistically
    // homogeneous up to the frame.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> noise(static_cast<std::size_t>(width) * height);
    for (auto& v : noise) v = normal(rng);

    const auto kx = gaussian_kernel(sigma_x);
    const auto ky = gaussian_kernel(sigma_y);
    const int rx = static_cast<int>(kx.size() / 2), ry = static_cast<int>(ky.size() / 2);
    std::vector<double> tmp(noise.size()), out(noise.size());
    for (int j = 0; j < height; ++j) {
        for (int i = 0; i < width; ++i) {
            double s = 0.0;
            for (int d = -rx; d <= rx; ++d) s += kx[d + rx] * noise[j * width + ((i + d) % width + width) % width];
            tmp[j * width + i] = s;
        }
    }
    for (int j = 0; j < height; ++j) {
        for (int i = 0; i < width; ++i) {
            double s = 0.0;
            for (int d = -ry; d <= ry; ++d) s += ky[d + ry] * tmp[(((j + d) % height + height) % height) * width + i];
            out[j * width + i] = s;
        }
    }
    double mean = 0.0;
    for (double v : out) mean += v;
    mean /= out.size();
    double var = 0.0;
    for (double v : out) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / out.size());
    for (auto& v : out) v = (v - mean) / sd;
    return GreyscaleImage(width, height, std::move(out));
}

std::vector<Point2> triangular_lattice(int cols, int rows, double spacing) {
    std::vector<Point2> pts;
    const double h = spacing * std::sqrt(3.0) / 2.0;
    for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < cols; ++i) {
            pts.push_back({spacing * (i + 0.5 * (j % 2)), h * j});
        }
    }
    return pts;
}

std::vector<Point2> square_lattice(int cols, int rows, double spacing) {
    std::vector<Point2> pts;
    for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < cols; ++i) pts.push_back({spacing * i, spacing * j});
    }
    return pts;
}

std::vector<Point2> uniform_points(int n, double xmin, double ymin, double xmax, double ymax,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
    std::vector<Point2> pts;
    for (int k = 0; k < n; ++k) {
        const double x = ux(rng);
        pts.push_back({x, uy(rng)});
    }
    return pts;
}

std::vector<Point2> random_star_polygon(int n, double rmin, double rmax, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * std::numbers::pi), ur(rmin, rmax);
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (auto& a : angles) a = ua(rng);
    std::sort(angles.begin(), angles.end());
    std::vector<Point2> pts;
    for (double a : angles) {
        const double r = ur(rng);
        pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return pts;
}

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("morpho-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::uint8_t> to_png8(const GreyscaleImage& img) {
    std::vector<std::uint16_t> samples;
    for (double v : img.values()) {
        samples.push_back(static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
    }
    return morpho::encode_png(img.width(), img.height(), 0, 8, samples);
}

}  // namespace fixtures
