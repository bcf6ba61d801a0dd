#include "morpho/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "morpho/analysis.hpp"
#include "morpho/errors.hpp"
#include "morpho/marching_squares.hpp"

namespace morpho::cli {

namespace {

double parse_number(std::string_view tok, const std::string& context) {
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw InvalidInput("cannot parse '" + std::string(tok) + "' in " + context);
    }
    return v;
}

const char* subcommand_name(Subcommand s) {
    switch (s) {
        case Subcommand::polygon: return "polygon";
        case Subcommand::image: return "image";
        case Subcommand::points: return "points";
        case Subcommand::map: return "map";
        case Subcommand::analyze: return "analyze";
    }
    return "?";
}

const char* channel_name(ChannelSelector c) {
    switch (c) {
        case ChannelSelector::red: return "red";
        case ChannelSelector::green: return "green";
        case ChannelSelector::blue: return "blue";
        case ChannelSelector::alpha: return "alpha";
        case ChannelSelector::luma: return "luma";
    }
    return "?";
}

const char* boundary_name(BoundaryPolicy b) {
    switch (b) {
        case BoundaryPolicy::clip: return "clip";
        case BoundaryPolicy::exclude_border: return "exclude-border";
        case BoundaryPolicy::periodic: return "periodic";
    }
    return "?";
}

std::vector<std::string> provenance(const RunConfig& c, const std::vector<double>& thresholds) {
    std::vector<std::string> lines;
    lines.push_back(std::string("morpho ") + subcommand_name(c.subcommand));
    lines.push_back("in=" + c.input);
    lines.push_back("smax=" + std::to_string(c.s_max));
    switch (c.subcommand) {
        case Subcommand::image:
        case Subcommand::map: {
            std::string t;
            for (double v : thresholds) t += (t.empty() ? "" : ",") + format_number(v);
            lines.push_back("thresholds=" + t);
            lines.push_back(std::string("channel=") + channel_name(c.channel));
            lines.push_back(std::string("close_border=") + (c.close_border ? "true" : "false"));
            if (c.subcommand == Subcommand::map) {
                lines.push_back("grid=" + std::to_string(c.grid_cols) + "x" + std::to_string(c.grid_rows));
            }
            break;
        }
        case Subcommand::points:
            lines.push_back(std::string("boundary=") + boundary_name(c.boundary));
            break;
        default: break;
    }
    return lines;
}

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string produce(const RunConfig& c, std::ostream& err) {
    if (c.s_max < 2) throw InvalidInput("--smax must be at least 2");
    switch (c.subcommand) {
        case Subcommand::polygon: {
            std::vector<std::string> warnings;
            const Polygon poly = read_polygon(c.input, /*auto_orient=*/true, &warnings);
            for (const auto& w : warnings) err << "warning: " << w << "\n";
            const std::vector<ResultRow> rows = {make_result_row(
                std::filesystem::path(c.input).filename().string(), std::nullopt, imt_polygon(poly, c.s_max),
                c.s_max)};
            return results_csv(rows, c.s_max, provenance(c, {}));
        }
        case Subcommand::image:
        case Subcommand::map: {
            auto thresholds = parse_threshold_spec(c.thresholds);
            std::sort(thresholds.begin(), thresholds.end());
            const GreyscaleImage img = load_image(c.input, c.channel);
            MarchingSquaresConfig cfg;
            cfg.s_max = c.s_max;
            cfg.close_border = c.close_border;
            if (c.subcommand == Subcommand::image) {
                const auto sweep = threshold_sweep(img, thresholds, cfg, !c.serial);
                std::vector<ResultRow> rows;
                bool open = false;
                for (const auto& [t, acc] : sweep) {
                    open = open || !acc.is_closed(1e-9);
                    rows.push_back(make_result_row("image", t, acc, c.s_max));
                }
                if (open && !c.close_border) {
                    err << "warning: excursion set touches the image border; contours are open "
                           "(see --close-border)\n";
                }
                return results_csv(rows, c.s_max, provenance(c, thresholds));
            }
            if (c.grid_cols < 1 || c.grid_rows < 1) throw InvalidInput("--grid must be positive");
            std::vector<std::pair<double, MinkowskiMapGrid>> maps;
            for (double t : thresholds) {
                cfg.threshold = t;
                maps.emplace_back(t, minkowski_map(img, cfg, {c.grid_cols, c.grid_rows, std::nullopt}));
            }
            return map_csv(maps, c.s_max, provenance(c, thresholds));
        }
        case Subcommand::points: {
            const PointSet ps = read_points(c.input);
            const auto cells = analyze_point_pattern(ps, c.boundary, c.s_max);
            return cells_csv(cells, c.s_max, provenance(c, {}));
        }
        case Subcommand::analyze: {
            const auto result = analyze(nlohmann::json::parse(read_all(c.input)));
            if (result.contains("error")) {
                throw InvalidInput(result["error"]["message"].get<std::string>());
            }
            return result.dump() + "\n";
        }
    }
    throw InvalidInput("unknown subcommand");
}

}  // namespace

std::vector<double> parse_threshold_spec(const std::string& text) {
    const std::string ctx = "threshold spec '" + text + "'";
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw InvalidInput(ctx + " must be min:max:count");
        const double lo = parse_number(parts[0], ctx);
        const double hi = parse_number(parts[1], ctx);
        const double count_d = parse_number(parts[2], ctx);
        if (count_d != std::floor(count_d)) throw InvalidInput(ctx + ": count must be an integer");
        if (count_d < 1) throw InvalidInput(ctx + ": count must be at least 1");
        if (lo > hi) throw InvalidInput(ctx + ": min exceeds max");
        const int count = static_cast<int>(count_d);
        if (count == 1) return {lo};
        std::vector<double> out;
        for (int k = 0; k < count; ++k) out.push_back(lo + (hi - lo) * k / (count - 1));
        out.back() = hi;
        return out;
    }
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_number(p, ctx));
    if (out.empty()) throw InvalidInput(ctx + " is empty");
    return out;
}

std::pair<int, int> parse_grid_spec(const std::string& text) {
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos) throw InvalidInput("grid spec '" + text + "' must be COLSxROWS");
    const double cols = parse_number(std::string_view(text).substr(0, x), "grid spec");
    const double rows = parse_number(std::string_view(text).substr(x + 1), "grid spec");
    if (cols < 1 || rows < 1 || cols != std::floor(cols) || rows != std::floor(rows)) {
        throw InvalidInput("grid spec '" + text + "' needs positive integers");
    }
    return {static_cast<int>(cols), static_cast<int>(rows)};
}

ChannelSelector parse_channel(const std::string& text) {
    if (text == "red") return ChannelSelector::red;
    if (text == "green") return ChannelSelector::green;
    if (text == "blue") return ChannelSelector::blue;
    if (text == "alpha") return ChannelSelector::alpha;
    if (text == "luma") return ChannelSelector::luma;
    throw InvalidInput("unknown channel '" + text + "'");
}

BoundaryPolicy parse_boundary(const std::string& text) {
    if (text == "clip") return BoundaryPolicy::clip;
    if (text == "exclude-border") return BoundaryPolicy::exclude_border;
    if (text == "periodic") return BoundaryPolicy::periodic;
    throw InvalidInput("unknown boundary policy '" + text + "'");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const std::string text = produce(config, err);
        if (config.output) {
            write_text_atomic(*config.output, text);
        } else {
            out << text;
        }
        return kOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Irreducible Minkowski tensor analysis of polygons, images and point patterns"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string out_path, channel = "luma", boundary = "clip", grid = "1x1";
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--in", cfg.input, "input file")->required();
        sub->add_option("--out", out_path, "output file (default: stdout)");
        sub->add_option("--smax", cfg.s_max, "highest tensor rank")->capture_default_str();
    };
    auto add_image = [&](CLI::App* sub) {
        sub->add_option("--thresholds", cfg.thresholds, "list a,b,c or range min:max:count")
            ->capture_default_str();
        sub->add_option("--channel", channel, "red|green|blue|alpha|luma")->capture_default_str();
        sub->add_flag("--close-border", cfg.close_border, "close contours along the image frame");
    };

    auto* polygon = app.add_subcommand("polygon", "analyze a counterclockwise polygon");
    add_common(polygon);
    auto* image = app.add_subcommand("image", "analyze excursion sets of a PNG image");
    add_common(image);
    add_image(image);
    image->add_flag("--serial", cfg.serial, "run the threshold sweep on one thread");
    auto* points = app.add_subcommand("points", "analyze Voronoi cells of a point pattern");
    add_common(points);
    points->add_option("--boundary", boundary, "clip|exclude-border|periodic")->capture_default_str();
    auto* map = app.add_subcommand("map", "Minkowski map of a PNG image");
    add_common(map);
    add_image(map);
    map->add_option("--grid", grid, "COLSxROWS")->capture_default_str();
    auto* analyze_cmd = app.add_subcommand("analyze", "answer a JSON analysis request ('-' for stdin)");
    add_common(analyze_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kValidationError;
    }

    try {
        if (*polygon) cfg.subcommand = Subcommand::polygon;
        if (*image) cfg.subcommand = Subcommand::image;
        if (*points) cfg.subcommand = Subcommand::points;
        if (*map) cfg.subcommand = Subcommand::map;
        if (*analyze_cmd) cfg.subcommand = Subcommand::analyze;
        if (!out_path.empty()) cfg.output = out_path;
        cfg.channel = parse_channel(channel);
        cfg.boundary = parse_boundary(boundary);
        std::tie(cfg.grid_cols, cfg.grid_rows) = parse_grid_spec(grid);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }
    return run(cfg, out, err);
}

}  // namespace morpho::cli
