#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "terralens/errors.hpp"
#include "terralens/rng.hpp"

namespace terralens {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

inline double radians(double deg) { return deg * kDegToRad; }
inline double degrees(double rad) { return rad * kRadToDeg; }

/// Wraps an angle in degrees into [-180, 180].
double normalize_lon(double lon);

/// Position on the unit sphere in degrees. Construction validates ranges
/// and canonicalizes the longitude of a pole to 0.
class GeoCoord {
public:
    GeoCoord() = default;
    GeoCoord(double lon, double lat);

    /// Accepts any finite longitude and wraps it; latitude must be in range.
    static GeoCoord wrapped(double lon, double lat);

    double lon() const { return lon_; }
    double lat() const { return lat_; }

    friend bool operator==(const GeoCoord&, const GeoCoord&) = default;

private:
    double lon_ = 0.0;
    double lat_ = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend Vec3 operator*(Vec3 a, double s) { return s * a; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) { return (1.0 / norm(a)) * a; }

/// Unit vector: x toward (0,0), y toward (90E,0), z toward the north pole.
Vec3 to_vector(const GeoCoord& g);
GeoCoord to_geo(Vec3 v);

/// Angle between two unit vectors in radians, via atan2 of |a x b| and a.b.
double angle_between(Vec3 a, Vec3 b);

using Mat3 = std::array<std::array<double, 3>, 3>;

Vec3 apply(const Mat3& m, Vec3 v);
Vec3 apply_transpose(const Mat3& m, Vec3 v);
Mat3 multiply(const Mat3& a, const Mat3& b);

/// Three-angle rotation of the geographic frame, in degrees.
///
/// Applied as: lambda about the polar axis (longitude shift), then phi about
/// the rotated y axis, then gamma about the view axis through (0,0). This is
/// the same convention as d3-geo's geoRotation([lambda, phi, gamma]); for
/// example (0, 90, 0) brings the south pole to (0,0) and the north pole to
/// the antimeridian.
struct SphericalRotation {
    double lambda = 0.0;
    double phi = 0.0;
    double gamma = 0.0;

    Mat3 matrix() const;

    friend bool operator==(const SphericalRotation&, const SphericalRotation&) = default;
};

/// Euler angles (lambda, phi, gamma) of a rotation matrix in the convention
/// above, with phi in [-90, 90].
SphericalRotation rotation_from_matrix(const Mat3& m);

GeoCoord rotate(const SphericalRotation& r, const GeoCoord& g);
GeoCoord inverse_rotate(const SphericalRotation& r, const GeoCoord& g);

/// Great-circle distance in degrees, in [0, 180].
double great_circle_distance(const GeoCoord& a, const GeoCoord& b);

/// Initial bearing of the minor arc a -> b, degrees clockwise from north in
/// [0, 360). At a pole, "north" is taken along the pole's canonical meridian.
/// Throws AntipodalOrCoincident when the arc is not unique.
double initial_bearing(const GeoCoord& a, const GeoCoord& b);

/// Point reached from `start` after `dist` degrees along `bearing`.
GeoCoord destination(const GeoCoord& start, double bearing, double dist);

/// Signed angular distance (degrees) from `target` to the great circle through
/// `path_start` with heading `path_bearing`; positive left of travel.
double cross_track_distance(const GeoCoord& path_start, double path_bearing,
                            const GeoCoord& target);

/// Great-circle midpoint of the minor arc.
GeoCoord midpoint(const GeoCoord& a, const GeoCoord& b);

class SphericalPolygon {
public:
    explicit SphericalPolygon(std::vector<GeoCoord> vertices);

    const std::vector<GeoCoord>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

private:
    std::vector<GeoCoord> vertices_;
};

/// Enclosed area in steradians, by spherical excess over a triangle fan from
/// vertex 0. The result is orientation-normalized: the smaller of the two
/// regions bounded by the ring is returned.
double polygon_area(const SphericalPolygon& p);
double polygon_area(std::span<const GeoCoord> ring);

/// Area-uniform point on the sphere.
GeoCoord uniform_sphere_sample(Rng& rng);

}  // namespace terralens
