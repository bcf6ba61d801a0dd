#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "morpho/errors.hpp"
#include "morpho/io.hpp"

namespace morpho {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed on " + path.string());
    return ss.str();
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i])) ++i;
        const std::size_t start = i;
        while (i < line.size() && !is_sep(line[i])) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::optional<double> to_double(std::string_view tok) {
    double v = 0.0;
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

struct Coordinates {
    std::vector<Point2> points;
    std::optional<Box> box;
};

Coordinates parse_coordinates(const std::string& text) {
    Coordinates out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        const auto hash = view.find('#');
        if (hash != std::string_view::npos) {
            const auto comment = tokens(view.substr(hash + 1));
            if (!comment.empty() && comment.front() == "box") {
                if (comment.size() != 5) throw ParseError(lineno, "box header needs 4 numbers");
                std::array<double, 4> b{};
                for (int k = 0; k < 4; ++k) {
                    const auto v = to_double(comment[k + 1]);
                    if (!v) throw ParseError(lineno, "bad box value '" + std::string(comment[k + 1]) + "'");
                    b[k] = *v;
                }
                if (!(b[0] < b[2]) || !(b[1] < b[3])) throw ParseError(lineno, "box has non-positive extent");
                out.box = Box{b[0], b[1], b[2], b[3]};
            }
            view = view.substr(0, hash);
        }
        const auto tok = tokens(view);
        if (tok.empty()) continue;
        if (tok.size() != 2) {
            throw ParseError(lineno, "expected 2 coordinates, found " + std::to_string(tok.size()));
        }
        const auto x = to_double(tok[0]);
        const auto y = to_double(tok[1]);
        if (!x || !y) {
            throw ParseError(lineno, "cannot parse '" + std::string(x ? tok[1] : tok[0]) + "' as a number");
        }
        out.points.push_back({*x, *y});
    }
    return out;
}

}  // namespace

PointSet parse_points(const std::string& text) {
    auto coords = parse_coordinates(text);
    if (coords.points.empty()) throw InvalidInput("no points in input");
    const Box box = coords.box.value_or(bounding_box(coords.points, 1e-9));
    return PointSet(std::move(coords.points), box);
}

PointSet read_points(const std::filesystem::path& path) { return parse_points(read_file(path)); }

Polygon parse_polygon(const std::string& text, bool auto_orient, std::vector<std::string>* warnings) {
    auto coords = parse_coordinates(text);
    if (coords.points.size() < 3) {
        throw InvalidInput("polygon needs at least 3 vertices, got " +
                           std::to_string(coords.points.size()));
    }
    if (signed_area(coords.points) == 0.0) throw InvalidInput("polygon has zero signed area");
    if (!auto_orient) return Polygon(std::move(coords.points));
    bool reversed = false;
    Polygon poly = Polygon::oriented(std::move(coords.points), &reversed);
    if (reversed && warnings) warnings->push_back("polygon was clockwise; vertex order reversed");
    return poly;
}

Polygon read_polygon(const std::filesystem::path& path, bool auto_orient,
                     std::vector<std::string>* warnings) {
    return parse_polygon(read_file(path), auto_orient, warnings);
}

std::vector<ShapeIndex> shape_indices(const MinkowskiAccumulator& acc, int s_max) {
    std::vector<ShapeIndex> out;
    for (int s = 2; s <= s_max; ++s) {
        ShapeIndex q{s, 0.0, std::numeric_limits<double>::quiet_NaN()};
        if (acc.perimeter() > 0.0) {
            q.magnitude = acc.msm(s);
            try {
                q.direction = acc.preferred_direction(s);
            } catch (const NoDirection&) {
            }
        }
        out.push_back(q);
    }
    return out;
}

ResultRow make_result_row(std::string label, std::optional<double> threshold,
                          const MinkowskiAccumulator& acc, int s_max) {
    return {std::move(label), threshold, acc.area(), acc.perimeter(), shape_indices(acc, s_max)};
}

std::string format_number(double v) {
    if (!std::isfinite(v)) return {};
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void put_comments(std::string& out, std::span<const std::string> comments) {
    for (const auto& c : comments) out += "# " + c + "\n";
}

std::string q_header(int s_max) {
    std::string out;
    for (int s = 2; s <= s_max; ++s) out += ",q" + std::to_string(s) + ",arg" + std::to_string(s);
    return out;
}

void put_q(std::string& out, std::span<const ShapeIndex> q) {
    for (const auto& idx : q) out += "," + format_number(idx.magnitude) + "," + format_number(idx.direction);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else if (c != '\r') {
            out.back() += c;
        }
    }
    return out;
}

}  // namespace

std::string results_csv(std::span<const ResultRow> rows, int s_max, std::span<const std::string> comments) {
    std::string out;
    put_comments(out, comments);
    out += "label,threshold,area,perimeter" + q_header(s_max) + "\n";
    for (const auto& r : rows) {
        if (static_cast<int>(r.q.size()) != s_max - 1) throw InvalidInput("row q list does not match s_max");
        out += quote(r.label) + "," + (r.threshold ? format_number(*r.threshold) : std::string{}) + "," +
               format_number(r.area) + "," + format_number(r.perimeter);
        put_q(out, r.q);
        out += "\n";
    }
    return out;
}

std::string cells_csv(std::span<const VoronoiCellResult> cells, int s_max,
                      std::span<const std::string> comments) {
    std::string out;
    put_comments(out, comments);
    out += "x,y,area,perimeter" + q_header(s_max) + ",is_border\n";
    for (const auto& c : cells) {
        out += format_number(c.generator.x) + "," + format_number(c.generator.y) + "," +
               format_number(c.metrics.area()) + "," + format_number(c.metrics.perimeter());
        put_q(out, shape_indices(c.metrics, s_max));
        out += c.is_border ? ",1\n" : ",0\n";
    }
    return out;
}

std::string map_csv(std::span<const std::pair<double, MinkowskiMapGrid>> maps, int s_max,
                    std::span<const std::string> comments) {
    std::string out;
    put_comments(out, comments);
    out += "threshold,col,row,area,perimeter" + q_header(s_max) + "\n";
    for (const auto& [t, grid] : maps) {
        for (int row = 0; row < grid.rows(); ++row) {
            for (int col = 0; col < grid.cols(); ++col) {
                const auto& acc = grid.cell(col, row);
                out += format_number(t) + "," + std::to_string(col) + "," + std::to_string(row) + "," +
                       format_number(acc.area()) + "," + format_number(acc.perimeter());
                put_q(out, shape_indices(acc, s_max));
                out += "\n";
            }
        }
    }
    return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string());
        out << text;
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write failed on " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot write " + path.string());
    }
}

void write_results(std::span<const ResultRow> rows, const std::filesystem::path& path, int s_max,
                   std::span<const std::string> comments) {
    write_text_atomic(path, results_csv(rows, s_max, comments));
}

std::vector<ResultRow> parse_results(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::vector<ResultRow> rows;
    bool header = false;
    int lineno = 0;
    auto number = [&](const std::string& f) {
        if (f.empty()) return std::numeric_limits<double>::quiet_NaN();
        const auto v = to_double(f);
        if (!v) throw ParseError(lineno, "bad number '" + f + "'");
        return *v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_csv(line);
        if (!header) {
            if (f.size() < 4 || f[0] != "label" || (f.size() - 4) % 2 != 0) {
                throw ParseError(lineno, "unexpected results header");
            }
            header = true;
            continue;
        }
        if (f.size() < 4 || (f.size() - 4) % 2 != 0) throw ParseError(lineno, "wrong field count");
        ResultRow r;
        r.label = f[0];
        if (!f[1].empty()) r.threshold = number(f[1]);
        r.area = number(f[2]);
        r.perimeter = number(f[3]);
        for (std::size_t k = 4; k < f.size(); k += 2) {
            r.q.push_back({static_cast<int>((k - 4) / 2 + 2), number(f[k]), number(f[k + 1])});
        }
        rows.push_back(std::move(r));
    }
    if (!header) throw ParseError(lineno, "missing results header");
    return rows;
}

}  // namespace morpho
