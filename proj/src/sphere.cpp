#include "terralens/sphere.hpp"

#include <algorithm>
#include <string>

namespace terralens {

namespace {

// Minimum angular separation (radians) below which two vertices or an arc are
// treated as coincident.
constexpr double kCoincident = 1e-12;

// Local east and north unit vectors at g. Defined through the longitude so
// that they stay well defined at the poles (where lon is canonically 0).
void local_frame(const GeoCoord& g, Vec3& east, Vec3& north) {
    const double lam = radians(g.lon());
    const double phi = radians(g.lat());
    const double sl = std::sin(lam);
    const double cl = std::cos(lam);
    const double sp = std::sin(phi);
    const double cp = std::cos(phi);
    east = {-sl, cl, 0.0};
    north = {-sp * cl, -sp * sl, cp};
}

double wrap_360(double deg) {
    double b = std::fmod(deg, 360.0);
    if (b < 0.0) b += 360.0;
    if (b >= 360.0) b -= 360.0;
    return b;
}

}  // namespace

double normalize_lon(double lon) {
    if (lon >= -180.0 && lon <= 180.0) return lon;
    double x = std::fmod(lon + 180.0, 360.0);
    if (x < 0.0) x += 360.0;
    return x - 180.0;
}

GeoCoord::GeoCoord(double lon, double lat) : lon_(lon), lat_(lat) {
    if (!std::isfinite(lon) || !std::isfinite(lat)) {
        throw InvalidArgument("GeoCoord: non-finite coordinate");
    }
    if (lat < -90.0 || lat > 90.0) {
        throw InvalidArgument("GeoCoord: latitude " + std::to_string(lat) + " out of range");
    }
    if (lon < -180.0 || lon > 180.0) {
        throw InvalidArgument("GeoCoord: longitude " + std::to_string(lon) + " out of range");
    }
    if (std::abs(lat) == 90.0) lon_ = 0.0;
}

GeoCoord GeoCoord::wrapped(double lon, double lat) {
    if (!std::isfinite(lon)) throw InvalidArgument("GeoCoord: non-finite longitude");
    return GeoCoord(normalize_lon(lon), lat);
}

Vec3 to_vector(const GeoCoord& g) {
    const double lam = radians(g.lon());
    const double phi = radians(g.lat());
    const double cp = std::cos(phi);
    return {cp * std::cos(lam), cp * std::sin(lam), std::sin(phi)};
}

GeoCoord to_geo(Vec3 v) {
    const double h = std::hypot(v.x, v.y);
    const double lat = std::clamp(degrees(std::atan2(v.z, h)), -90.0, 90.0);
    const double lon = h == 0.0 ? 0.0 : std::clamp(degrees(std::atan2(v.y, v.x)), -180.0, 180.0);
    return GeoCoord(lon, lat);
}

double angle_between(Vec3 a, Vec3 b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

Vec3 apply(const Mat3& m, Vec3 v) {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Vec3 apply_transpose(const Mat3& m, Vec3 v) {
    return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
            m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
            m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
}

Mat3 multiply(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            out[i][j] = s;
        }
    }
    return out;
}

Mat3 SphericalRotation::matrix() const {
    const double cl = std::cos(radians(lambda)), sl = std::sin(radians(lambda));
    const double cp = std::cos(radians(phi)), sp = std::sin(radians(phi));
    const double cg = std::cos(radians(gamma)), sg = std::sin(radians(gamma));
    const Mat3 rl{{{cl, -sl, 0.0}, {sl, cl, 0.0}, {0.0, 0.0, 1.0}}};
    const Mat3 rp{{{cp, 0.0, -sp}, {0.0, 1.0, 0.0}, {sp, 0.0, cp}}};
    const Mat3 rg{{{1.0, 0.0, 0.0}, {0.0, cg, -sg}, {0.0, sg, cg}}};
    return multiply(rg, multiply(rp, rl));
}

SphericalRotation rotation_from_matrix(const Mat3& m) {
    // Image of the north pole is (-sin phi, -cos phi sin gamma, cos phi cos gamma);
    // first row is (cos phi cos lambda, -cos phi sin lambda, -sin phi).
    const double sp = std::clamp(-m[0][2], -1.0, 1.0);
    const double cp = std::hypot(m[1][2], m[2][2]);
    SphericalRotation r;
    r.phi = degrees(std::atan2(sp, cp));
    if (cp > 1e-12) {
        r.lambda = degrees(std::atan2(-m[0][1], m[0][0]));
        r.gamma = degrees(std::atan2(-m[1][2], m[2][2]));
    } else {
        // Gimbal lock: fold all spin into lambda.
        r.lambda = degrees(std::atan2(m[1][0], m[1][1]));
        r.gamma = 0.0;
    }
    return r;
}

GeoCoord rotate(const SphericalRotation& r, const GeoCoord& g) {
    if (r.phi == 0.0 && r.gamma == 0.0) {
        if (std::abs(g.lat()) == 90.0) return g;
        return GeoCoord::wrapped(g.lon() + r.lambda, g.lat());
    }
    return to_geo(terralens::apply(r.matrix(), to_vector(g)));
}

GeoCoord inverse_rotate(const SphericalRotation& r, const GeoCoord& g) {
    if (r.phi == 0.0 && r.gamma == 0.0) {
        if (std::abs(g.lat()) == 90.0) return g;
        return GeoCoord::wrapped(g.lon() - r.lambda, g.lat());
    }
    return to_geo(apply_transpose(r.matrix(), to_vector(g)));
}

double great_circle_distance(const GeoCoord& a, const GeoCoord& b) {
    return degrees(angle_between(to_vector(a), to_vector(b)));
}

double initial_bearing(const GeoCoord& a, const GeoCoord& b) {
    const Vec3 va = to_vector(a);
    const Vec3 vb = to_vector(b);
    const double d = angle_between(va, vb);
    if (d < kCoincident || kPi - d < kCoincident) {
        throw AntipodalOrCoincident("initial_bearing: arc is not unique");
    }
    Vec3 east, north;
    local_frame(a, east, north);
    return wrap_360(degrees(std::atan2(dot(vb, east), dot(vb, north))));
}

GeoCoord destination(const GeoCoord& start, double bearing, double dist) {
    if (!std::isfinite(bearing) || !std::isfinite(dist)) {
        throw InvalidArgument("destination: non-finite bearing or distance");
    }
    Vec3 east, north;
    local_frame(start, east, north);
    const double th = radians(bearing);
    const double dl = radians(dist);
    const Vec3 heading = std::cos(th) * north + std::sin(th) * east;
    return to_geo(std::cos(dl) * to_vector(start) + std::sin(dl) * heading);
}

double cross_track_distance(const GeoCoord& path_start, double path_bearing, const GeoCoord& target) {
    if (!std::isfinite(path_bearing)) throw DegeneratePath("cross_track_distance: undefined bearing");
    Vec3 east, north;
    local_frame(path_start, east, north);
    const double th = radians(path_bearing);
    const Vec3 heading = std::cos(th) * north + std::sin(th) * east;
    // Pole of the path's great circle, on the left of travel.
    const Vec3 left = cross(to_vector(path_start), heading);
    const Vec3 t = to_vector(target);
    const double s = dot(t, left);
    const double in_plane = norm(t - s * left);
    return degrees(std::atan2(s, in_plane));
}

GeoCoord midpoint(const GeoCoord& a, const GeoCoord& b) {
    const Vec3 sum = to_vector(a) + to_vector(b);
    if (norm(sum) < kCoincident) throw AntipodalOrCoincident("midpoint: antipodal endpoints");
    return to_geo(normalized(sum));
}

SphericalPolygon::SphericalPolygon(std::vector<GeoCoord> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) throw DegeneratePolygon("polygon needs at least 3 vertices");
}

double polygon_area(const SphericalPolygon& p) {
    return polygon_area(std::span<const GeoCoord>(p.vertices()));
}

double polygon_area(std::span<const GeoCoord> ring) {
    const std::size_t n = ring.size();
    if (n < 3) throw DegeneratePolygon("polygon needs at least 3 vertices");
    std::vector<Vec3> v;
    v.reserve(n);
    for (const GeoCoord& g : ring) v.push_back(to_vector(g));
    for (std::size_t i = 0; i < n; ++i) {
        const double d = angle_between(v[i], v[(i + 1) % n]);
        if (d < kCoincident) throw DegeneratePolygon("duplicate consecutive vertices");
        if (kPi - d < kCoincident) throw DegeneratePolygon("antipodal consecutive vertices");
    }
    // Signed excess of each fan triangle (Van Oosterom-Strackee).
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec3& a = v[0];
        const Vec3& b = v[i];
        const Vec3& c = v[i + 1];
        const double num = dot(a, cross(b, c));
        const double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
        total += 2.0 * std::atan2(num, den);
    }
    double area = std::abs(total);
    if (area < 1e-15) throw DegeneratePolygon("polygon encloses no area");
    if (area > 2.0 * kPi) area = 4.0 * kPi - area;
    return area;
}

GeoCoord uniform_sphere_sample(Rng& rng) {
    const double lon = rng.uniform(-180.0, 180.0);
    const double z = rng.uniform(-1.0, 1.0);
    return GeoCoord(lon, degrees(std::asin(z)));
}

}  // namespace terralens
