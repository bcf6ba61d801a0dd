#include "morpho/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "morpho/errors.hpp"

namespace morpho {

namespace {

constexpr double kRelTol = 1e-12;

// > 0 when p lies strictly inside the circumcircle of counterclockwise abc.
double incircle(Point2 a, Point2 b, Point2 c, Point2 p) {
    const double adx = a.x - p.x, ady = a.y - p.y;
    const double bdx = b.x - p.x, bdy = b.y - p.y;
    const double cdx = c.x - p.x, cdy = c.y - p.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

std::uint64_t edge_key(int from, int to) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
           static_cast<std::uint32_t>(to);
}

}  // namespace

Point2 circumcenter(Point2 a, Point2 b, Point2 c) {
    const Point2 ab = b - a, ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    const double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
    return a + Point2{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
}

Delaunay::Delaunay(std::span<const Point2> points) : points_(points.begin(), points.end()) {
    const int n = static_cast<int>(points_.size());
    for (int i = 0; i < n; ++i) {
        if (!is_finite(points_[i])) {
            throw InvalidInput("non-finite coordinate at point " + std::to_string(i));
        }
    }
    if (n < 3) throw DegenerateGeometry("triangulation needs at least 3 points");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return std::pair(points_[i].x, points_[i].y) < std::pair(points_[j].x, points_[j].y);
    });
    for (int k = 1; k < n; ++k) {
        if (points_[order[k]] == points_[order[k - 1]]) {
            throw InvalidInput("duplicate points " + std::to_string(std::min(order[k], order[k - 1])) +
                               " and " + std::to_string(std::max(order[k], order[k - 1])));
        }
    }

    // Seed with the first non-collinear triple in input order.
    const int i0 = 0, i1 = 1;
    int i2 = -1;
    for (int k = 2; k < n; ++k) {
        const Point2 a = points_[i0], b = points_[i1], c = points_[k];
        const double scale = std::max(norm(b - a), norm(c - a));
        if (std::abs(orient(a, b, c)) > kRelTol * scale * scale) {
            i2 = k;
            break;
        }
    }
    if (i2 < 0) throw DegenerateGeometry("all points are collinear");

    int a = i0, b = i1, c = i2;
    if (orient(points_[a], points_[b], points_[c]) < 0) std::swap(b, c);
    tris_ = {
        {{a, b, c}, {}},
        {{b, a, kInfinite}, {}},
        {{c, b, kInfinite}, {}},
        {{a, c, kInfinite}, {}},
    };
    alive_.assign(tris_.size(), 1);
    std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
    for (int t = 0; t < 4; ++t) {
        for (int k = 0; k < 3; ++k) {
            edges[edge_key(tris_[t].v[(k + 1) % 3], tris_[t].v[(k + 2) % 3])] = {t, k};
        }
    }
    for (int t = 0; t < 4; ++t) {
        for (int k = 0; k < 3; ++k) {
            const auto& other =
                edges.at(edge_key(tris_[t].v[(k + 2) % 3], tris_[t].v[(k + 1) % 3]));
            tris_[t].adj[k] = other.first;
        }
    }
    last_ = 0;

    for (int k = 0; k < n; ++k) {
        if (k == i0 || k == i1 || k == i2) continue;
        insert(k);
    }
}

bool Delaunay::conflicts(const Triangle& tri, Point2 p) {
    const auto inf = std::find(tri.v.begin(), tri.v.end(), kInfinite);
    if (inf == tri.v.end()) {
        const Point2 a = points_[tri.v[0]], b = points_[tri.v[1]], c = points_[tri.v[2]];
        double scale = 0.0;
        for (Point2 q : {a, b, c}) scale = std::max({scale, std::abs(q.x - p.x), std::abs(q.y - p.y)});
        const double det = incircle(a, b, c, p);
        const double s2 = scale * scale;
        if (std::abs(det) <= kRelTol * s2 * s2) {
            ++ties_;
            return false;
        }
        return det > 0.0;
    }
    // Infinite triangle (u, w, inf): conflicts when p sees the hull edge u -> w
    // from outside, or lies strictly inside that edge.
    const int k = static_cast<int>(inf - tri.v.begin());
    const Point2 u = points_[tri.v[(k + 1) % 3]];
    const Point2 w = points_[tri.v[(k + 2) % 3]];
    const double scale = std::max(norm(w - u), norm(p - u));
    const double o = orient(u, w, p);
    if (o > kRelTol * scale * scale) return true;
    if (o < -kRelTol * scale * scale) return false;
    const double along = dot(p - u, w - u);
    return along > 0.0 && along < dot(w - u, w - u);
}

int Delaunay::locate(Point2 p, int start) const {
    int t = start;
    const int limit = static_cast<int>(tris_.size()) + 8;
    for (int step = 0; step < limit; ++step) {
        const Triangle& tri = tris_[t];
        const auto inf = std::find(tri.v.begin(), tri.v.end(), kInfinite);
        if (inf != tri.v.end()) {
            const int k = static_cast<int>(inf - tri.v.begin());
            const Point2 u = points_[tri.v[(k + 1) % 3]];
            const Point2 w = points_[tri.v[(k + 2) % 3]];
            if (orient(u, w, p) > 0.0) return t;
            t = tri.adj[k];
            continue;
        }
        int next = -1;
        for (int k = 0; k < 3; ++k) {
            if (orient(points_[tri.v[(k + 1) % 3]], points_[tri.v[(k + 2) % 3]], p) < 0.0) {
                next = tri.adj[k];
                break;
            }
        }
        if (next < 0) return t;
        t = next;
    }
    // Walk failed to terminate on a degenerate configuration; scan instead.
    for (int s = 0; s < static_cast<int>(tris_.size()); ++s) {
        if (!alive_[s]) continue;
        const Triangle& tri = tris_[s];
        if (std::find(tri.v.begin(), tri.v.end(), kInfinite) != tri.v.end()) continue;
        bool inside = true;
        for (int k = 0; k < 3 && inside; ++k) {
            inside = orient(points_[tri.v[(k + 1) % 3]], points_[tri.v[(k + 2) % 3]], p) >= 0.0;
        }
        if (inside) return s;
    }
    for (int s = 0; s < static_cast<int>(tris_.size()); ++s) {
        if (!alive_[s]) continue;
        const Triangle& tri = tris_[s];
        const auto inf = std::find(tri.v.begin(), tri.v.end(), kInfinite);
        if (inf == tri.v.end()) continue;
        const int k = static_cast<int>(inf - tri.v.begin());
        if (orient(points_[tri.v[(k + 1) % 3]], points_[tri.v[(k + 2) % 3]], p) > 0.0) return s;
    }
    return start;
}

void Delaunay::insert(int index) {
    const Point2 p = points_[index];
    int start = last_;
    if (!alive_[start]) {
        start = static_cast<int>(std::find(alive_.rbegin(), alive_.rend(), 1) - alive_.rbegin());
        start = static_cast<int>(alive_.size()) - 1 - start;
    }
    const int seed = locate(p, start);

    std::vector<int> cavity{seed};
    std::vector<std::uint8_t> in_cavity(tris_.size(), 0);
    in_cavity[seed] = 1;
    for (std::size_t q = 0; q < cavity.size(); ++q) {
        for (int nb : tris_[cavity[q]].adj) {
            if (in_cavity[nb]) continue;
            if (conflicts(tris_[nb], p)) {
                in_cavity[nb] = 1;
                cavity.push_back(nb);
            }
        }
    }

    // The cavity must be star-shaped from p; absorb triangles behind any
    // boundary edge that p does not strictly see.
    struct Boundary {
        int u, w, outer;
    };
    std::vector<Boundary> boundary;
    for (bool grown = true; grown;) {
        grown = false;
        boundary.clear();
        for (int t : cavity) {
            const Triangle& tri = tris_[t];
            for (int k = 0; k < 3; ++k) {
                const int nb = tri.adj[k];
                if (in_cavity[nb]) continue;
                const int u = tri.v[(k + 1) % 3], w = tri.v[(k + 2) % 3];
                if (u != kInfinite && w != kInfinite && orient(points_[u], points_[w], p) <= 0.0) {
                    in_cavity[nb] = 1;
                    cavity.push_back(nb);
                    grown = true;
                    break;
                }
                boundary.push_back({u, w, nb});
            }
            if (grown) break;
        }
    }

    for (int t : cavity) alive_[t] = 0;

    std::unordered_map<int, int> starting_at;
    const int first_new = static_cast<int>(tris_.size());
    for (const auto& e : boundary) {
        const int t = static_cast<int>(tris_.size());
        tris_.push_back({{e.u, e.w, index}, {-1, -1, e.outer}});
        alive_.push_back(1);
        starting_at[e.u] = t;
        Triangle& outer = tris_[e.outer];
        for (int k = 0; k < 3; ++k) {
            if (outer.v[(k + 1) % 3] == e.w && outer.v[(k + 2) % 3] == e.u) outer.adj[k] = t;
        }
    }
    for (int t = first_new; t < static_cast<int>(tris_.size()); ++t) {
        Triangle& tri = tris_[t];
        // across (w, p) is the new triangle starting at w; across (p, u) the
        // one ending at u
        tri.adj[0] = starting_at.at(tri.v[1]);
        tris_[tri.adj[0]].adj[1] = t;
    }
    last_ = first_new;
}

std::vector<std::array<int, 3>> Delaunay::triangles() const {
    std::vector<std::array<int, 3>> out;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        if (!alive_[t]) continue;
        const auto& v = tris_[t].v;
        if (std::find(v.begin(), v.end(), kInfinite) != v.end()) continue;
        out.push_back(v);
    }
    return out;
}

std::vector<std::vector<int>> Delaunay::neighbors() const {
    std::vector<std::vector<int>> nb(points_.size());
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        if (!alive_[t]) continue;
        const auto& v = tris_[t].v;
        for (int k = 0; k < 3; ++k) {
            const int a = v[k], b = v[(k + 1) % 3];
            if (a == kInfinite || b == kInfinite) continue;
            nb[a].push_back(b);
            nb[b].push_back(a);
        }
    }
    for (auto& list : nb) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return nb;
}

}  // namespace morpho
