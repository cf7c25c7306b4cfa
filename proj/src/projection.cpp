#include "terralens/projection.hpp"

#include <algorithm>
#include <optional>

namespace terralens {

namespace {

constexpr double kEllipseTolerance = 1e-9;

int side_of(const Vec3& v) { return v.y > 0.0 ? 1 : (v.y < 0.0 ? -1 : 0); }

bool on_antimeridian(const Vec3& v) { return v.y == 0.0 && v.x < 0.0; }

// One vertex of a piece under construction. `side` forces the longitude sign
// of a vertex lying on the antimeridian (0 = decide from the piece).
struct Vertex {
    Vec3 v;
    int side = 0;
};

using Piece = std::vector<Vertex>;

// Appends the interior points and the end of the arc a -> b, split into 2^k
// equal parts by recursive midpoint insertion.
void densify_into(Piece& out, const Vec3& a, const Vec3& b, int b_side, double max_rad) {
    const double ang = angle_between(a, b);
    int depth = 0;
    while (ang / static_cast<double>(1 << depth) > max_rad && depth < 30) ++depth;
    std::vector<Vec3> pts{a, b};
    for (int d = 0; d < depth; ++d) {
        std::vector<Vec3> next;
        next.reserve(pts.size() * 2 - 1);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            next.push_back(pts[i]);
            next.push_back(normalized(pts[i] + pts[i + 1]));
        }
        next.push_back(pts.back());
        pts = std::move(next);
    }
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) out.push_back({pts[i], 0});
    out.push_back({b, b_side});
}

int piece_side(const Piece& p) {
    for (const Vertex& v : p) {
        if (v.side != 0) return v.side;
        const int s = side_of(v.v);
        if (s != 0 && !on_antimeridian(v.v)) return s;
    }
    return 1;
}

GeoCoord vertex_to_geo(const Vertex& v, int fallback_side) {
    GeoCoord g = to_geo(v.v);
    const int s = v.side != 0 ? v.side : (on_antimeridian(v.v) ? fallback_side : 0);
    if (s != 0 && std::abs(g.lat()) != 90.0) return GeoCoord(180.0 * s, g.lat());
    return g;
}

std::vector<GeoCoord> finish_piece(const Piece& p) {
    const int side = piece_side(p);
    std::vector<GeoCoord> out;
    out.reserve(p.size());
    for (const Vertex& v : p) {
        GeoCoord g = vertex_to_geo(v, side);
        if (!out.empty() && out.back() == g) continue;
        out.push_back(g);
    }
    return out;
}

// Points strictly between lat_from and lat_to along the meridian lon.
void append_meridian(std::vector<GeoCoord>& out, double lon, double lat_from, double lat_to, double step) {
    const double span = lat_to - lat_from;
    const int n = static_cast<int>(std::ceil(std::abs(span) / step));
    for (int i = 1; i < n; ++i) {
        out.emplace_back(lon, lat_from + span * static_cast<double>(i) / n);
    }
}

// Cuts and densifies one polyline or ring given as rotated unit vectors.
std::vector<Piece> cut_sequence(const std::vector<Vec3>& pts, const std::vector<int>& hints, bool closed,
                               double max_rad, bool& was_cut) {
    std::vector<Piece> pieces;
    Piece cur{{pts.front(), hints.front()}};
    was_cut = false;
    const std::size_t edges = closed ? pts.size() : pts.size() - 1;
    for (std::size_t i = 0; i < edges; ++i) {
        const Vec3& a = pts[i];
        const Vec3& b = pts[(i + 1) % pts.size()];
        const int hb = hints[(i + 1) % pts.size()];
        const int sa = side_of(a);
        const int sb = side_of(b);
        if (sa * sb < 0) {
            const Vec3 p = normalized(std::abs(b.y) * a + std::abs(a.y) * b);
            if (p.x < 0.0) {
                const Vec3 pin{p.x, 0.0, p.z};
                densify_into(cur, a, pin, sa, max_rad);
                pieces.push_back(std::move(cur));
                cur = Piece{{pin, sb}};
                densify_into(cur, pin, b, 0, max_rad);
                was_cut = true;
                continue;
            }
        }
        // Passing from one side to the other through a vertex that lies
        // exactly on the antimeridian.
        if (sb != 0 && on_antimeridian(a) && cur.size() > 1 && !on_antimeridian(b)) {
            const int ps = piece_side(cur);
            if (ps != sb) {
                cur.back().side = ps;
                pieces.push_back(std::move(cur));
                cur = Piece{{a, sb}};
                was_cut = true;
            }
        }
        densify_into(cur, a, b, hb, max_rad);
    }
    pieces.push_back(std::move(cur));
    return pieces;
}

}  // namespace

double hammer_ellipse_radius2(const MapPoint& m) {
    return m.x * m.x / 8.0 + m.y * m.y / 2.0;
}

MapPoint hammer_forward_radians(double lam, double phi) {
    const double cp = std::cos(phi);
    const double half = 0.5 * lam;
    const double d = std::sqrt(1.0 + cp * std::cos(half));
    return {2.0 * kSqrt2 * cp * std::sin(half) / d, kSqrt2 * std::sin(phi) / d};
}

MapPoint hammer_forward(const GeoCoord& g) {
    return hammer_forward_radians(radians(g.lon()), radians(g.lat()));
}

GeoCoord hammer_inverse(const MapPoint& m) {
    const double r2 = hammer_ellipse_radius2(m);
    if (!std::isfinite(r2) || r2 > 1.0 + kEllipseTolerance) {
        throw OutsideProjection("hammer_inverse: point outside the Hammer ellipse");
    }
    const double z2 = std::max(0.5, 1.0 - m.x * m.x / 16.0 - m.y * m.y / 4.0);
    const double z = std::sqrt(z2);
    const double lam = 2.0 * std::atan2(z * m.x, 2.0 * (2.0 * z2 - 1.0));
    const double phi = std::asin(std::clamp(z * m.y, -1.0, 1.0));
    return GeoCoord(std::clamp(degrees(lam), -180.0, 180.0), std::clamp(degrees(phi), -90.0, 90.0));
}

MapPoint clip_to_ellipse(const MapPoint& m) {
    const double r2 = hammer_ellipse_radius2(m);
    if (r2 <= 1.0) return m;
    const double s = 1.0 / std::sqrt(r2);
    return {m.x * s, m.y * s};
}

TissotEllipse tissot(const GeoCoord& g, double step_deg) {
    if (std::abs(g.lat()) >= 89.0) throw NearPole("tissot: latitude too close to a pole");
    if (!(step_deg > 0.0)) throw InvalidArgument("tissot: step must be positive");
    const double lam = radians(g.lon());
    const double phi = radians(g.lat());
    const double h = radians(step_deg);

    const MapPoint pe = hammer_forward_radians(lam + h, phi);
    const MapPoint me = hammer_forward_radians(lam - h, phi);
    const MapPoint pn = hammer_forward_radians(lam, phi + h);
    const MapPoint mn = hammer_forward_radians(lam, phi - h);

    // Columns: derivative per unit arc toward east and toward north.
    const double east_arc = 2.0 * h * std::cos(phi);
    const double north_arc = 2.0 * h;
    const double j00 = (pe.x - me.x) / east_arc;
    const double j10 = (pe.y - me.y) / east_arc;
    const double j01 = (pn.x - mn.x) / north_arc;
    const double j11 = (pn.y - mn.y) / north_arc;

    // Closed-form 2x2 singular value decomposition.
    const double e = 0.5 * (j00 + j11);
    const double f = 0.5 * (j00 - j11);
    const double gg = 0.5 * (j10 + j01);
    const double hh = 0.5 * (j10 - j01);
    const double q = std::hypot(e, hh);
    const double r = std::hypot(f, gg);
    const double a1 = std::atan2(gg, f);
    const double a2 = std::atan2(hh, e);

    TissotEllipse out;
    out.center = g;
    out.semi_major = q + r;
    out.semi_minor = std::abs(q - r);
    double orient = degrees(0.5 * (a2 + a1));
    orient = std::fmod(orient, 180.0);
    if (orient < 0.0) orient += 180.0;
    if (orient >= 180.0) orient -= 180.0;
    out.orientation = orient;
    return out;
}

GeoPath prepare_path(const GeoPath& path, const SphericalRotation& r, double resample_max) {
    if (!(resample_max > 0.0)) throw InvalidArgument("prepare_path: resample_max must be positive");
    const double max_rad = radians(resample_max);
    const Mat3 rot = r.matrix();
    const bool identity = r.lambda == 0.0 && r.phi == 0.0 && r.gamma == 0.0;

    GeoPath out;
    out.closed = path.closed;
    for (const auto& seg : path.segments) {
        if (seg.empty()) continue;
        std::vector<Vec3> pts;
        std::vector<int> hints;
        pts.reserve(seg.size());
        hints.reserve(seg.size());
        for (const GeoCoord& g : seg) {
            Vec3 v = identity ? to_vector(g) : terralens::apply(rot, to_vector(g));
            int hint = 0;
            // Input lying exactly on lon +-180 keeps its side.
            if (identity && std::abs(g.lon()) == 180.0 && std::abs(g.lat()) != 90.0) {
                v.y = 0.0;
                hint = g.lon() > 0.0 ? 1 : -1;
            }
            pts.push_back(v);
            hints.push_back(hint);
        }
        if (path.closed && pts.size() > 1 && angle_between(pts.front(), pts.back()) == 0.0) {
            pts.pop_back();
            hints.pop_back();
        }
        if (pts.size() == 1) {
            out.segments.push_back({to_geo(pts.front())});
            continue;
        }

        bool was_cut = false;
        std::vector<Piece> pieces = cut_sequence(pts, hints, path.closed, max_rad, was_cut);

        if (!path.closed) {
            for (const Piece& p : pieces) {
                auto g = finish_piece(p);
                if (g.size() >= 2) out.segments.push_back(std::move(g));
            }
            continue;
        }

        if (!was_cut) {
            auto ring = finish_piece(pieces.front());
            if (ring.size() > 1 && ring.back() == ring.front()) ring.pop_back();
            out.segments.push_back(std::move(ring));
            continue;
        }

        // The walk started mid-piece: the last piece continues into the first.
        Piece merged = std::move(pieces.back());
        pieces.pop_back();
        merged.insert(merged.end(), pieces.front().begin() + 1, pieces.front().end());
        pieces.front() = std::move(merged);

        double mean_lat = 0.0;
        for (const Vec3& v : pts) mean_lat += v.z;

        for (const Piece& p : pieces) {
            std::vector<GeoCoord> ring;
            ring.reserve(p.size());
            for (const Vertex& v : p) {
                GeoCoord g = vertex_to_geo(v, piece_side(p));
                if (!ring.empty() && ring.back() == g) continue;
                ring.push_back(g);
            }
            if (ring.size() < 2) continue;
            const GeoCoord first = ring.front();
            const GeoCoord last = ring.back();
            const int s_first = first.lon() < 0.0 ? -1 : 1;
            const int s_last = last.lon() < 0.0 ? -1 : 1;
            if (s_first == s_last) {
                append_meridian(ring, last.lon(), last.lat(), first.lat(), resample_max);
            } else {
                // Wraps around a pole: close along the edge through it.
                const double pole = mean_lat >= 0.0 ? 90.0 : -90.0;
                append_meridian(ring, last.lon(), last.lat(), pole, resample_max);
                ring.emplace_back(0.0, pole);
                append_meridian(ring, first.lon(), pole, first.lat(), resample_max);
            }
            out.segments.push_back(std::move(ring));
        }
    }
    return out;
}

std::vector<std::vector<MapPoint>> project_path(const GeoPath& prepared) {
    std::vector<std::vector<MapPoint>> out;
    out.reserve(prepared.segments.size());
    for (const auto& seg : prepared.segments) {
        std::vector<MapPoint> line;
        line.reserve(seg.size());
        for (const GeoCoord& g : seg) line.push_back(clip_to_ellipse(hammer_forward(g)));
        out.push_back(std::move(line));
    }
    return out;
}

CurvedAngles curved_remap(const MapPoint& m) {
    if (!std::isfinite(m.x) || !std::isfinite(m.y) || hammer_ellipse_radius2(m) > 1.0 + kEllipseTolerance) {
        throw OutsideProjection("curved_remap: point outside the Hammer ellipse");
    }
    return {m.x / kHammerHalfWidth * kCurvedHalfSpanH, m.y / kHammerHalfHeight * kCurvedHalfSpanV};
}

MapPoint curved_unmap(const CurvedAngles& a) {
    const MapPoint m{a.azimuth_h / kCurvedHalfSpanH * kHammerHalfWidth,
                     a.azimuth_v / kCurvedHalfSpanV * kHammerHalfHeight};
    if (hammer_ellipse_radius2(m) > 1.0 + kEllipseTolerance) {
        throw OutsideProjection("curved_unmap: angles outside the mapped section");
    }
    return m;
}

}  // namespace terralens
