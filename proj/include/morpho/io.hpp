#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morpho/accumulator.hpp"
#include "morpho/marching_squares.hpp"
#include "morpho/voronoi.hpp"

namespace morpho {

enum class ChannelSelector { red, green, blue, alpha, luma };

// Luma weights applied to [0,1]-normalized channels.
inline constexpr double kLumaR = 0.2126;
inline constexpr double kLumaG = 0.7152;
inline constexpr double kLumaB = 0.0722;

/// Decodes a non-interlaced PNG (colour types 0, 2, 4, 6; bit depths 8 and
/// 16) and extracts one channel normalized to [0, 1]. Greyscale images
/// answer red/green/blue/luma with the grey value; images without alpha
/// report alpha = 1.
///
/// Throws IoError when the file cannot be read, UnsupportedFormat naming
/// the offending property, DecodeError for corrupt or truncated data.
GreyscaleImage load_image(const std::filesystem::path& path,
                          ChannelSelector channel = ChannelSelector::luma);
GreyscaleImage decode_png(std::span<const std::uint8_t> bytes,
                          ChannelSelector channel = ChannelSelector::luma);

// Minimal PNG encoder (filter 0, single IDAT) used for fixtures and the
// round-trip tests. colour_type 0/2/4/6, bit_depth 8 or 16; samples are
// interleaved per pixel, row-major.
std::vector<std::uint8_t> encode_png(int width, int height, int colour_type, int bit_depth,
                                     std::span<const std::uint16_t> samples);

// Reads "x y" pairs (whitespace or comma separated, '#' comments). An
// optional "# box xmin ymin xmax ymax" line fixes the window; otherwise it
// is the tight bounding box expanded by 1e-9.
PointSet read_points(const std::filesystem::path& path);
PointSet parse_points(const std::string& text);

// Same lexical format. With auto_orient, clockwise input is reversed and a
// message is appended to *warnings; without it, clockwise input throws
// OrientationError.
Polygon read_polygon(const std::filesystem::path& path, bool auto_orient,
                     std::vector<std::string>* warnings = nullptr);
Polygon parse_polygon(const std::string& text, bool auto_orient,
                      std::vector<std::string>* warnings = nullptr);

struct ShapeIndex {
    int s = 0;
    double magnitude = 0.0;
    double direction = 0.0;  // NaN when Psi_s vanishes
};

struct ResultRow {
    std::string label;
    std::optional<double> threshold;
    double area = 0.0;
    double perimeter = 0.0;
    std::vector<ShapeIndex> q;  // s = 2..S
};

// q_2..q_smax with preferred directions; zero-perimeter accumulators give
// q = 0 and NaN directions.
std::vector<ShapeIndex> shape_indices(const MinkowskiAccumulator& acc, int s_max);
ResultRow make_result_row(std::string label, std::optional<double> threshold,
                          const MinkowskiAccumulator& acc, int s_max);

// 12 significant digits; NaN and missing values become empty fields.
std::string format_number(double v);

/// CSV text with the header label,threshold,area,perimeter,q2,arg2,...,qS,argS.
/// Comment lines are emitted first, each prefixed with "# ".
std::string results_csv(std::span<const ResultRow> rows, int s_max,
                        std::span<const std::string> comments = {});

// Per-cell point-pattern CSV: x,y,area,perimeter,q2,arg2,...,qS,argS,is_border.
std::string cells_csv(std::span<const VoronoiCellResult> cells, int s_max,
                      std::span<const std::string> comments = {});

// Minkowski map CSV: threshold,col,row,area,perimeter,q2,arg2,...,qS,argS.
std::string map_csv(std::span<const std::pair<double, MinkowskiMapGrid>> maps, int s_max,
                    std::span<const std::string> comments = {});

// Writes via a temporary sibling file and rename, so a failed write leaves
// nothing behind. Throws IoError.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

void write_results(std::span<const ResultRow> rows, const std::filesystem::path& path,
                   int s_max, std::span<const std::string> comments = {});

// Parses results_csv output back into rows (comment lines skipped).
std::vector<ResultRow> parse_results(const std::string& csv);

}  // namespace morpho
