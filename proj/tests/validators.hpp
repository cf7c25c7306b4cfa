#pragma once

// Re-checks generated stimuli from their emitted coordinates only. Every
// quantity is recomputed with the oracle vector maths; the generator's own
// bookkeeping fields are compared against it, never trusted.

#include <optional>
#include <string>

#include "oracles.hpp"
#include "terralens/stimuli.hpp"

namespace oracle {

inline double arc_deg(const V3& a, const V3& b) {
    return std::atan2(std::sqrt(dot3(cross3(a, b), cross3(a, b))), dot3(a, b)) * 180.0 / std::numbers::pi;
}

inline V3 mid(const V3& a, const V3& b) { return unit({a[0] + b[0], a[1] + b[1], a[2] + b[2]}); }

inline double pair_cv(double a, double b) { return std::abs(a - b) / (a + b); }

inline double expected_distance_cv(terralens::Difficulty d) {
    return d == terralens::Difficulty::SmallVariation ? 0.05 : 0.10;
}
inline double expected_area_cv(terralens::Difficulty d) {
    return d == terralens::Difficulty::SmallVariation ? 0.075 : 0.10;
}
inline double expected_separation(terralens::Difficulty d) {
    return d == terralens::Difficulty::FarDistance ? 120.0 : 60.0;
}

/// Area of a convex polygon as a fan of triangles around its first vertex.
inline double fan_area(const std::vector<V3>& ring) {
    double a = 0.0;
    for (std::size_t i = 1; i + 1 < ring.size(); ++i) a += triangle_area(ring[0], ring[i], ring[i + 1]);
    return a;
}

/// Empty when the task is valid, otherwise the first violated invariant.
inline std::optional<std::string> validate(const terralens::DistanceTask& t) {
    const V3 a = vec(t.pair_ab[0]), b = vec(t.pair_ab[1]);
    const V3 x = vec(t.pair_xy[0]), y = vec(t.pair_xy[1]);
    const double d1 = arc_deg(a, b), d2 = arc_deg(x, y);
    for (double d : {d1, d2}) {
        if (d < 40.0 - 1e-9 || d > 60.0 + 1e-9) return "pair distance " + std::to_string(d) + " outside [40, 60]";
    }
    const double cv = pair_cv(d1, d2);
    if (std::abs(cv - expected_distance_cv(t.difficulty)) > 1e-6) return "distance cv " + std::to_string(cv);
    if (std::abs(cv - t.cv) > 1e-9) return "reported cv differs from recomputed";
    const double sep = arc_deg(mid(a, b), mid(x, y));
    if (std::abs(sep - expected_separation(t.difficulty)) > 1e-6) return "midpoint separation " + std::to_string(sep);
    if (t.truth != (d1 > d2 ? 0 : 1)) return "truth is not the longer pair";
    return std::nullopt;
}

inline std::optional<std::string> validate(const terralens::AreaTask& t) {
    double areas[2];
    for (int k = 0; k < 2; ++k) {
        const V3 c = vec(t.centroids[k]);
        std::vector<V3> ring;
        for (const auto& g : t.polygons[k].vertices()) ring.push_back(vec(g));
        if (ring.size() != 8) return "polygon does not have 8 vertices";
        V3 e, n;
        tangent_basis(c, e, n);
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const double r = arc_deg(c, ring[i]);
            if (std::abs(r - 8.0) > 1e-9) return "vertex radius " + std::to_string(r);
            const V3& p = ring[i];
            const V3& q = ring[(i + 1) % ring.size()];
            const double ap = std::atan2(dot3(p, e), dot3(p, n)), aq = std::atan2(dot3(q, e), dot3(q, n));
            double gap = std::abs(aq - ap) * 180.0 / std::numbers::pi;
            if (gap > 180.0) gap = 360.0 - gap;
            if (gap < 30.0 - 1e-9) return "adjacent central angle " + std::to_string(gap);
            // Convex: every other vertex on one side of this edge's great circle.
            const V3 normal = cross3(p, q);
            for (std::size_t j = 0; j < ring.size(); ++j) {
                if (j == i || j == (i + 1) % ring.size()) continue;
                if (dot3(normal, ring[j]) <= 0.0) return "polygon is not convex";
            }
        }
        areas[k] = fan_area(ring);
    }
    const double cv = pair_cv(areas[0], areas[1]);
    if (std::abs(cv - expected_area_cv(t.difficulty)) > 1e-6) return "area cv " + std::to_string(cv);
    const double sep = arc_deg(vec(t.centroids[0]), vec(t.centroids[1]));
    if (std::abs(sep - expected_separation(t.difficulty)) > 1e-6) return "centroid separation " + std::to_string(sep);
    if (t.truth != (areas[0] > areas[1] ? 0 : 1)) return "truth is not the larger polygon";
    return std::nullopt;
}

/// Perpendicular arc distance of `target` from the great circle through
/// `start` with initial bearing `bearing_deg` (left of travel positive).
inline double cross_track_deg(const terralens::GeoCoord& start, double bearing_deg, const terralens::GeoCoord& target) {
    const V3 s = vec(start);
    V3 e, n;
    tangent_basis(s, e, n);
    const double b = rad(bearing_deg);
    const V3 dir{std::sin(b) * e[0] + std::cos(b) * n[0], std::sin(b) * e[1] + std::cos(b) * n[1],
                 std::sin(b) * e[2] + std::cos(b) * n[2]};
    const V3 pole = cross3(s, dir);
    return std::asin(std::clamp(dot3(pole, vec(target)), -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

inline std::optional<std::string> validate(const terralens::DirectionTask& t, double miss_offset = 15.0) {
    const double sep = arc_deg(vec(t.arrow_start), vec(t.target));
    const double expected = t.condition == terralens::DirectionCondition::Far ? 120.0 : 60.0;
    if (std::abs(t.separation - expected) > 1e-12) return "separation field";
    const double xt = cross_track_deg(t.arrow_start, t.arrow_bearing, t.target);
    if (t.truth == terralens::DirectionTruth::Hit) {
        if (std::abs(xt) > 1e-9) return "hit target off the path by " + std::to_string(xt);
        if (std::abs(sep - expected) > 1e-6) return "hit separation " + std::to_string(sep);
    } else {
        if (std::abs(std::abs(xt) - miss_offset) > 1e-6) return "miss offset " + std::to_string(xt);
    }
    if (t.arrow_length != 10.0) return "arrow length";
    return std::nullopt;
}

}  // namespace oracle
