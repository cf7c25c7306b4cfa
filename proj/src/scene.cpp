#include "terralens/scene.hpp"

#include <algorithm>
#include <limits>

namespace terralens {

namespace {

constexpr double kSurfaceTolerance = 1e-6;

double flat_scale_x(const SceneParams& p) { return p.flat_width / (2.0 * kHammerHalfWidth); }
double flat_scale_y(const SceneParams& p) { return p.flat_height / (2.0 * kHammerHalfHeight); }

WorldPoint offset(const WorldPoint& c, double r, double x, double y, double z) {
    return {c.x + r * x, c.y + r * y, c.z + r * z};
}

double wrap_180(double deg) {
    double x = std::fmod(deg + 180.0, 360.0);
    if (x <= 0.0) x += 360.0;
    return x - 180.0;
}

}  // namespace

double distance(const WorldPoint& a, const WorldPoint& b) {
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

std::string_view to_string(SceneKind k) {
    switch (k) {
        case SceneKind::Exocentric: return "exocentric";
        case SceneKind::FlatMap: return "flat";
        case SceneKind::Egocentric: return "egocentric";
        case SceneKind::CurvedMap: return "curved";
    }
    return "unknown";
}

SceneKind scene_kind_from_string(std::string_view s) {
    for (SceneKind k : kAllSceneKinds) {
        if (to_string(k) == s) return k;
    }
    throw InvalidArgument("unknown scene kind: " + std::string(s));
}

WorldPoint embed_frame(const SceneEmbedding& s, const GeoCoord& f) {
    const SceneParams& p = s.params;
    switch (s.kind) {
        case SceneKind::Exocentric: {
            // Frame x (toward (0,0)) faces the viewer (+z), east is +x, north +y.
            const Vec3 v = to_vector(f);
            return offset(s.exo_center(), p.exo_radius, v.y, v.z, v.x);
        }
        case SceneKind::Egocentric: {
            // Seen from inside: (0,0) on the far wall along -z, east still to the right.
            const Vec3 v = to_vector(f);
            return offset(s.ego_center(), p.ego_radius, v.y, v.z, -v.x);
        }
        case SceneKind::FlatMap: {
            const MapPoint m = hammer_forward(f);
            return {m.x * flat_scale_x(p), m.y * flat_scale_y(p), -p.flat_distance};
        }
        case SceneKind::CurvedMap: {
            const CurvedAngles a = curved_remap(hammer_forward(f));
            const double h = radians(a.azimuth_h * p.curved_span_h / (2.0 * kCurvedHalfSpanH));
            const double v = radians(a.azimuth_v * p.curved_span_v / (2.0 * kCurvedHalfSpanV));
            const double cv = std::cos(v);
            return {p.curved_radius * cv * std::sin(h), p.curved_radius * std::sin(v),
                    -p.curved_radius * cv * std::cos(h)};
        }
    }
    throw InvalidArgument("embed: unknown scene kind");
}

WorldPoint embed(const SceneEmbedding& s, const GeoCoord& g) {
    return embed_frame(s, rotate(s.rotation, g));
}

GeoCoord unembed_frame(const SceneEmbedding& s, const WorldPoint& w) {
    const SceneParams& p = s.params;
    auto on_sphere = [&](const WorldPoint& c, double r) {
        const Vec3 d{w.x - c.x, w.y - c.y, w.z - c.z};
        const double len = norm(d);
        if (!(std::abs(len - r) <= kSurfaceTolerance)) throw Unreachable("point is not on the scene surface");
        return (1.0 / len) * d;
    };
    switch (s.kind) {
        case SceneKind::Exocentric: {
            const Vec3 d = on_sphere(s.exo_center(), p.exo_radius);
            return to_geo({d.z, d.x, d.y});
        }
        case SceneKind::Egocentric: {
            const Vec3 d = on_sphere(s.ego_center(), p.ego_radius);
            return to_geo({-d.z, d.x, d.y});
        }
        case SceneKind::FlatMap: {
            if (!(std::abs(w.z + p.flat_distance) <= kSurfaceTolerance)) {
                throw Unreachable("point is not on the map quad");
            }
            try {
                return hammer_inverse({w.x / flat_scale_x(p), w.y / flat_scale_y(p)});
            } catch (const OutsideProjection&) {
                throw Unreachable("point lies outside the map ellipse");
            }
        }
        case SceneKind::CurvedMap: {
            const Vec3 d = on_sphere({0.0, 0.0, 0.0}, p.curved_radius);
            const double v = degrees(std::asin(std::clamp(d.y, -1.0, 1.0)));
            const double h = degrees(std::atan2(d.x, -d.z));
            const CurvedAngles a{h * (2.0 * kCurvedHalfSpanH) / p.curved_span_h,
                                 v * (2.0 * kCurvedHalfSpanV) / p.curved_span_v};
            try {
                return hammer_inverse(curved_unmap(a));
            } catch (const OutsideProjection&) {
                throw Unreachable("point lies outside the curved map");
            }
        }
    }
    throw InvalidArgument("unembed: unknown scene kind");
}

GeoCoord unembed(const SceneEmbedding& s, const WorldPoint& p) {
    return inverse_rotate(s.rotation, unembed_frame(s, p));
}

SphericalRotation solve_recenter(const SceneEmbedding& s, const GeoCoord& grabbed, const WorldPoint& target) {
    const GeoCoord q = unembed_frame(s, target);
    const double gamma = s.rotation.gamma;

    // Undo the roll: w must equal R_phi * R_lambda * grabbed.
    const SphericalRotation roll_only{0.0, 0.0, gamma};
    const Vec3 w = apply_transpose(roll_only.matrix(), to_vector(q));

    const double lat0 = radians(grabbed.lat());
    const double c0 = std::cos(lat0);
    const double s0 = std::sin(lat0);
    constexpr double kSlack = 1e-12;
    if (std::abs(w.y) > c0 + kSlack) {
        throw Unreachable("target cannot be reached without changing the roll angle");
    }

    std::array<double, 2> lons{};
    if (c0 <= kSlack) {
        // Grabbed a pole: the longitude shift is free; keep the current one.
        lons = {radians(grabbed.lon() + s.rotation.lambda), radians(grabbed.lon() + s.rotation.lambda)};
    } else {
        const double l = std::asin(std::clamp(w.y / c0, -1.0, 1.0));
        lons = {l, kPi - l};
    }

    SphericalRotation best = s.rotation;
    double best_cost = std::numeric_limits<double>::infinity();
    for (double l : lons) {
        const double x = c0 * std::cos(l);
        const double phi = std::atan2(w.z, w.x) - std::atan2(s0, x);
        SphericalRotation cand{wrap_180(degrees(l) - grabbed.lon()), wrap_180(degrees(phi)), gamma};
        const double cost = std::abs(wrap_180(cand.lambda - s.rotation.lambda)) +
                            std::abs(wrap_180(cand.phi - s.rotation.phi));
        if (cost < best_cost) {
            best_cost = cost;
            best = cand;
        }
    }
    return best;
}

WorldPoint morph_frame(double t, const GeoCoord& f, const SceneParams& params) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("morph: t must be in [0, 1]");
    const SceneEmbedding flat{SceneKind::FlatMap, {}, params};
    const SceneEmbedding globe{SceneKind::Exocentric, {}, params};
    const WorldPoint a = embed_frame(flat, f);
    if (t == 0.0) return a;
    const WorldPoint b = embed_frame(globe, f);
    if (t == 1.0) return b;
    const double u = 1.0 - t;
    return {u * a.x + t * b.x, u * a.y + t * b.y, u * a.z + t * b.z};
}

WorldPoint morph(double t, const GeoCoord& g, const SphericalRotation& rotation, const SceneParams& params) {
    return morph_frame(t, rotate(rotation, g), params);
}

std::vector<GraticuleLine> graticule(double spacing) {
    if (!(spacing > 0.0) || spacing > 180.0) throw InvalidArgument("graticule: spacing out of range");
    const double count = 360.0 / spacing;
    if (std::abs(count - std::round(count)) > 1e-9) {
        throw InvalidArgument("graticule: spacing must divide 360");
    }
    const int n = static_cast<int>(std::round(count));
    std::vector<GraticuleLine> lines;

    for (int i = 0; i < n; ++i) {
        const double lon = -180.0 + spacing * i;
        GraticuleLine line{GraticuleKind::Meridian, lon, false, {}};
        std::vector<GeoCoord> pts;
        for (int lat = -90; lat <= 90; ++lat) pts.emplace_back(lon, static_cast<double>(lat));
        line.path.segments.push_back(std::move(pts));
        lines.push_back(std::move(line));
    }

    const int k_max = static_cast<int>(std::ceil(90.0 / spacing)) - 1;
    for (int k = -k_max; k <= k_max; ++k) {
        const double lat = spacing * k;
        if (std::abs(lat) >= 90.0) continue;
        GraticuleLine line{GraticuleKind::Parallel, lat, k == 0, {}};
        std::vector<GeoCoord> pts;
        for (int lon = -180; lon <= 180; ++lon) pts.emplace_back(static_cast<double>(lon), lat);
        line.path.segments.push_back(std::move(pts));
        lines.push_back(std::move(line));
    }
    return lines;
}

std::array<HorizonRing, 2> horizon_rings(const SceneParams& params) {
    const SceneEmbedding ego{SceneKind::Egocentric, {}, params};
    const WorldPoint c = ego.ego_center();
    auto make = [&](double lat) {
        const double phi = radians(lat);
        return HorizonRing{{c.x, c.y + params.ego_radius * std::sin(phi), c.z},
                           params.ego_radius * std::cos(phi), lat};
    };
    return {make(params.ring_lat_upper), make(params.ring_lat_lower)};
}

std::vector<WorldPoint> ring_points(const HorizonRing& ring, int count) {
    if (count < 3) throw InvalidArgument("ring_points: need at least 3 points");
    std::vector<WorldPoint> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double a = 2.0 * kPi * i / count;
        out.push_back({ring.center.x + ring.radius * std::cos(a), ring.center.y,
                       ring.center.z + ring.radius * std::sin(a)});
    }
    return out;
}

}  // namespace terralens
