#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "terralens/projection.hpp"
#include "terralens/sphere.hpp"

namespace terralens {

/// Metres; right-handed, y up, viewer head at the origin looking along -z.
struct WorldPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const WorldPoint&, const WorldPoint&) = default;
};

double distance(const WorldPoint& a, const WorldPoint& b);

enum class SceneKind { Exocentric, FlatMap, Egocentric, CurvedMap };

inline constexpr std::array<SceneKind, 4> kAllSceneKinds{SceneKind::Exocentric, SceneKind::FlatMap,
                                                         SceneKind::Egocentric, SceneKind::CurvedMap};

std::string_view to_string(SceneKind k);
SceneKind scene_kind_from_string(std::string_view s);

/// Physical dimensions of the four visualisations. Defaults are the study's
/// configuration.
struct SceneParams {
    // Globe seen from outside, floating in front of the viewer.
    double exo_radius = 0.4;
    double exo_distance = 1.0;

    // Flat quad facing the viewer; the Hammer ellipse inscribes it.
    double flat_width = 1.0;
    double flat_height = 0.5;
    double flat_distance = 1.0;

    // Sphere seen from inside. The viewer stands `ego_viewer_fraction` of the
    // radius from the centre, which lies ahead along -z.
    double ego_radius = 8.0;
    double ego_viewer_fraction = 0.8;
    // Latitudes (relative to the sphere centre) of the two static horizon rings.
    double ring_lat_upper = 30.0;
    double ring_lat_lower = -30.0;

    // Spherical section around the head.
    double curved_radius = 1.0;
    double curved_span_h = 108.0;
    double curved_span_v = 54.0;

    friend bool operator==(const SceneParams&, const SceneParams&) = default;
};

struct SceneEmbedding {
    SceneKind kind = SceneKind::Exocentric;
    SphericalRotation rotation;
    SceneParams params;

    WorldPoint exo_center() const { return {0.0, 0.0, -params.exo_distance}; }
    WorldPoint ego_center() const { return {0.0, 0.0, -params.ego_viewer_fraction * params.ego_radius}; }
};

/// World position of a geographic location. The scene rotation is applied
/// first; map kinds then project with Hammer. Before any recentering, (0,0)
/// faces the viewer in every scene.
WorldPoint embed(const SceneEmbedding& s, const GeoCoord& g);

/// Same as embed() for a location already expressed in the rotated frame.
WorldPoint embed_frame(const SceneEmbedding& s, const GeoCoord& frame_coord);

/// Inverse of embed_frame(): the rotated-frame coordinate of a surface point.
/// Throws Unreachable when `p` is off the surface by more than 1e-6 m or
/// outside the projected domain.
GeoCoord unembed_frame(const SceneEmbedding& s, const WorldPoint& p);

/// Geographic location shown at surface point `p` (inverse of embed()).
GeoCoord unembed(const SceneEmbedding& s, const WorldPoint& p);

/// Rotation that puts `grabbed` at `target_surface`, keeping the current roll.
///
/// With gamma fixed, lambda and phi can only move a point at latitude L to
/// frame positions whose y component (after undoing the roll) is at most
/// cos L in magnitude; targets beyond that throw Unreachable, as do points
/// off the surface or outside a map's domain. Of the two solutions the one
/// closest to the current rotation is returned.
SphericalRotation solve_recenter(const SceneEmbedding& s, const GeoCoord& grabbed,
                                 const WorldPoint& target_surface);

/// Linear blend between the flat-map and exocentric positions of g.
/// Endpoints return the embeddings exactly.
WorldPoint morph(double t, const GeoCoord& g, const SphericalRotation& rotation,
                 const SceneParams& params = {});

/// morph() for a location already in the rotated frame.
WorldPoint morph_frame(double t, const GeoCoord& frame_coord, const SceneParams& params = {});

enum class GraticuleKind { Meridian, Parallel };

struct GraticuleLine {
    GraticuleKind kind = GraticuleKind::Meridian;
    double value = 0.0;    // longitude of a meridian, latitude of a parallel
    bool emphasized = false;  // the equator
    GeoPath path;
};

/// Meridians at every multiple of `spacing` in [-180, 180) and parallels at
/// every multiple strictly between the poles. `spacing` must divide 360.
/// Lines are open polylines sampled every degree.
std::vector<GraticuleLine> graticule(double spacing);

/// Static circle of constant world elevation on the egocentric sphere.
struct HorizonRing {
    WorldPoint center;
    double radius = 0.0;
    double latitude = 0.0;
};

/// The two rings for these parameters. They do not depend on the rotation.
std::array<HorizonRing, 2> horizon_rings(const SceneParams& params);

std::vector<WorldPoint> ring_points(const HorizonRing& ring, int count);

}  // namespace terralens
