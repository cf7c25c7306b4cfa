#pragma once

#include <vector>

#include "terralens/sphere.hpp"

namespace terralens {

inline const double kSqrt2 = std::numbers::sqrt2;
inline const double kHammerHalfWidth = 2.0 * std::numbers::sqrt2;  // x extent
inline const double kHammerHalfHeight = std::numbers::sqrt2;         // y extent

/// Point in the Hammer plane of the unit sphere; the boundary is the ellipse
/// x^2/8 + y^2/2 = 1, which encloses area 4*pi.
struct MapPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const MapPoint&, const MapPoint&) = default;
};

/// x^2/8 + y^2/2; <= 1 inside the Hammer ellipse.
double hammer_ellipse_radius2(const MapPoint& m);

MapPoint hammer_forward(const GeoCoord& g);

/// Same formula on raw radians without range checks. Continuous across
/// lon = +-180 for |lon| < 2*pi, which finite differencing relies on.
MapPoint hammer_forward_radians(double lam, double phi);

/// Throws OutsideProjection if `m` lies outside the ellipse by more than 1e-9.
GeoCoord hammer_inverse(const MapPoint& m);

/// Pulls a point that spilled numerically outside the ellipse back onto it.
MapPoint clip_to_ellipse(const MapPoint& m);

struct TissotEllipse {
    GeoCoord center;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    /// Plane angle of the major axis, degrees counter-clockwise from +x, in [0, 180).
    double orientation = 0.0;
};

/// Tissot indicatrix of the Hammer projection at `g` from a central-difference
/// Jacobian with step `step_deg`. Scale factors are per unit arc on the unit
/// sphere, so an area-preserving point yields semi_major * semi_minor = 1.
/// Throws NearPole for |lat| >= 89.
TissotEllipse tissot(const GeoCoord& g, double step_deg = 1e-4);

/// Polylines (or rings, when `closed`) of geographic positions.
struct GeoPath {
    std::vector<std::vector<GeoCoord>> segments;
    bool closed = false;
};

/// Rotates every vertex, cuts edges where they cross the antimeridian of the
/// rotated frame and densifies so that no edge subtends more than
/// `resample_max` degrees. Cut points are emitted twice, once at lon +180 and
/// once at -180. Cut rings are re-closed along the map edge; a ring that
/// wraps around a pole is closed through that pole. Rings are emitted without
/// repeating their first vertex.
GeoPath prepare_path(const GeoPath& path, const SphericalRotation& r, double resample_max = 1.0);

/// Projects prepared geometry into the Hammer plane, clipping numerical spill.
std::vector<std::vector<MapPoint>> project_path(const GeoPath& prepared);

/// Horizontal/vertical angles (degrees) of a curved-map point.
struct CurvedAngles {
    double azimuth_h = 0.0;
    double azimuth_v = 0.0;
};

inline constexpr double kCurvedHalfSpanH = 54.0;
inline constexpr double kCurvedHalfSpanV = 27.0;

/// Linear map of the Hammer plane onto a 108 x 54 degree spherical section.
CurvedAngles curved_remap(const MapPoint& m);
MapPoint curved_unmap(const CurvedAngles& a);

}  // namespace terralens
