#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "morpho/io.hpp"
#include "morpho/voronoi.hpp"

namespace morpho::cli {

enum class Subcommand { polygon, image, points, map, analyze };

struct RunConfig {
    Subcommand subcommand = Subcommand::polygon;
    std::string input;
    std::optional<std::string> output;  // stdout when unset
    int s_max = kDefaultSMax;
    std::string thresholds = "0.5";
    ChannelSelector channel = ChannelSelector::luma;
    BoundaryPolicy boundary = BoundaryPolicy::clip;
    int grid_cols = 1;
    int grid_rows = 1;
    bool close_border = false;
    bool serial = false;
};

enum ExitCode : int { kOk = 0, kValidationError = 1, kIoError = 2 };

// "a,b,c" list, single value, or inclusive "min:max:count" range.
// Throws InvalidInput.
std::vector<double> parse_threshold_spec(const std::string& text);

// "COLSxROWS", e.g. "4x3". Throws InvalidInput.
std::pair<int, int> parse_grid_spec(const std::string& text);

ChannelSelector parse_channel(const std::string& text);
BoundaryPolicy parse_boundary(const std::string& text);

// Executes a validated configuration. Output goes to config.output, or to
// out when unset; diagnostics go to err. Never leaves a partial output file.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (CLI11) and runs. Usage errors exit with kValidationError.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace morpho::cli
