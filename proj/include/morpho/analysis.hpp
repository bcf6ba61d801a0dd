#pragma once

#include <string>

#include <json.hpp>

namespace morpho {

// Payload limits of the interactive front end.
inline constexpr std::size_t kMaxRequestPoints = 1000;
inline constexpr int kMaxRequestPixels = 500 * 500;

/// JSON request/response boundary used by the browser front end and the
/// `analyze` CLI subcommand.
///
/// Request:
///   {"mode": "polygon" | "points" | "image", "s_max": 12, "payload": {...}}
///   polygon payload: {"vertices": [[x, y], ...]}
///   points payload:  {"points": [[x, y], ...], "box": [xmin, ymin, xmax, ymax]?,
///                     "boundary": "clip" | "exclude-border" | "periodic"?}
///   image payload:   {"threshold": t, "close_border": bool?,
///                     "image": {"width": w, "height": h, "values": [...], "pixel_spacing": 1?}}
///
/// Response:
///   {"area": a, "perimeter": p, "q": [{"s": s, "magnitude": q, "direction": phi | null}, ...],
///    "per_cell": [{"generator": [x, y], "cell": [[x, y], ...], "is_border": b, "q": [...]}],
///    "warnings": [...]}
/// per_cell is present only in points mode; q covers s = 2..s_max.
/// Failures come back as {"error": {"kind": ..., "message": ...}}.
nlohmann::json analyze(const nlohmann::json& request);

std::string analyze_text(const std::string& request_json);

}  // namespace morpho
