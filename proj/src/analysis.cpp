#include "morpho/analysis.hpp"

#include <cmath>

#include "morpho/errors.hpp"
#include "morpho/io.hpp"

namespace morpho {

using nlohmann::json;

namespace {

Point2 to_point(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InvalidInput("points must be [x, y] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point2> to_points(const json& j, const char* what) {
    if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array");
    std::vector<Point2> out;
    out.reserve(j.size());
    for (const auto& p : j) out.push_back(to_point(p));
    return out;
}

json q_json(const MinkowskiAccumulator& acc, int s_max) {
    json q = json::array();
    for (const auto& idx : shape_indices(acc, s_max)) {
        q.push_back({{"s", idx.s},
                     {"magnitude", idx.magnitude},
                     {"direction", std::isnan(idx.direction) ? json(nullptr) : json(idx.direction)}});
    }
    return q;
}

json summary(const MinkowskiAccumulator& acc, int s_max) {
    return {{"area", acc.area()}, {"perimeter", acc.perimeter()}, {"q", q_json(acc, s_max)}};
}

BoundaryPolicy to_policy(const std::string& name) {
    if (name == "clip") return BoundaryPolicy::clip;
    if (name == "exclude-border") return BoundaryPolicy::exclude_border;
    if (name == "periodic") return BoundaryPolicy::periodic;
    throw InvalidInput("unknown boundary policy '" + name + "'");
}

json analyze_polygon(const json& payload, int s_max) {
    bool reversed = false;
    const Polygon poly = Polygon::oriented(to_points(payload.at("vertices"), "vertices"), &reversed);
    json out = summary(imt_polygon(poly, s_max), s_max);
    out["warnings"] = json::array();
    if (reversed) out["warnings"].push_back("polygon was clockwise; vertex order reversed");
    return out;
}

json analyze_points(const json& payload, int s_max) {
    auto pts = to_points(payload.at("points"), "points");
    if (pts.size() > kMaxRequestPoints) {
        throw InvalidInput("too many points: " + std::to_string(pts.size()) + " > " +
                           std::to_string(kMaxRequestPoints));
    }
    Box box;
    if (payload.contains("box")) {
        const auto& b = payload.at("box");
        if (!b.is_array() || b.size() != 4) throw InvalidInput("box must be [xmin, ymin, xmax, ymax]");
        box = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
    } else {
        box = bounding_box(pts, 1e-9);
    }
    const auto policy = to_policy(payload.value("boundary", std::string("clip")));
    const auto cells = analyze_point_pattern(PointSet(std::move(pts), box), policy, s_max);

    MinkowskiAccumulator total(s_max);
    json per_cell = json::array();
    for (const auto& c : cells) {
        total += c.metrics;
        json poly = json::array();
        for (Point2 v : c.cell.vertices()) poly.push_back({v.x, v.y});
        per_cell.push_back({{"generator", {c.generator.x, c.generator.y}},
                            {"cell", std::move(poly)},
                            {"is_border", c.is_border},
                            {"q", q_json(c.metrics, s_max)}});
    }
    json out = summary(total, s_max);
    out["per_cell"] = std::move(per_cell);
    out["warnings"] = json::array();
    return out;
}

json analyze_image(const json& payload, int s_max) {
    const auto& im = payload.at("image");
    const int w = im.at("width").get<int>();
    const int h = im.at("height").get<int>();
    if (w < 2 || h < 2) throw InvalidInput("image must be at least 2x2 pixels");
    if (static_cast<long long>(w) * h > kMaxRequestPixels) {
        throw InvalidInput("image too large: " + std::to_string(w) + "x" + std::to_string(h) +
                           " exceeds 500x500 pixels");
    }
    GreyscaleImage img(w, h, im.at("values").get<std::vector<double>>(), im.value("pixel_spacing", 1.0));
    MarchingSquaresConfig cfg;
    cfg.threshold = payload.at("threshold").get<double>();
    cfg.close_border = payload.value("close_border", false);
    cfg.s_max = s_max;
    const auto acc = imt_interpolated_marching_squares(img, cfg);
    json out = summary(acc, s_max);
    out["warnings"] = json::array();
    if (!cfg.close_border && !acc.is_closed(1e-9)) {
        out["warnings"].push_back("excursion set touches the image border; contours are open");
    }
    return out;
}

json error_json(const char* kind, const std::string& message) {
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

json analyze(const json& request) {
    try {
        const std::string mode = request.at("mode").get<std::string>();
        const int s_max = request.value("s_max", kDefaultSMax);
        if (s_max < 2) throw InvalidInput("s_max must be at least 2");
        const json& payload = request.at("payload");
        if (mode == "polygon") return analyze_polygon(payload, s_max);
        if (mode == "points") return analyze_points(payload, s_max);
        if (mode == "image") return analyze_image(payload, s_max);
        throw InvalidInput("unknown mode '" + mode + "'");
    } catch (const json::exception& e) {
        return error_json("invalid-request", e.what());
    } catch (const InvalidInput& e) {
        return error_json("invalid-input", e.what());
    } catch (const Error& e) {
        return error_json("analysis-failed", e.what());
    }
}

std::string analyze_text(const std::string& request_json) {
    json request;
    try {
        request = json::parse(request_json);
    } catch (const json::exception& e) {
        return error_json("invalid-request", e.what()).dump();
    }
    return analyze(request).dump();
}

}  // namespace morpho
