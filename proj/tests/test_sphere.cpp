#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "terralens/sphere.hpp"

using namespace terralens;
using doctest::Approx;

namespace {

GeoCoord random_geo(Rng& rng) { return uniform_sphere_sample(rng); }

}  // namespace

TEST_CASE("GeoCoord validates and canonicalizes poles") {
    CHECK_THROWS_AS(GeoCoord(0.0, 91.0), InvalidArgument);
    CHECK_THROWS_AS(GeoCoord(181.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(GeoCoord(NAN, 0.0), InvalidArgument);
    CHECK(GeoCoord(45.0, 90.0).lon() == 0.0);
    CHECK(GeoCoord(-120.0, -90.0).lon() == 0.0);
    CHECK(GeoCoord::wrapped(190.0, 0.0).lon() == Approx(-170.0));
    CHECK(GeoCoord::wrapped(-540.0, 0.0).lon() == Approx(-180.0));
}

TEST_CASE("great_circle_distance examples") {
    CHECK(great_circle_distance({0, 0}, {90, 0}) == Approx(90.0).epsilon(1e-14));
    CHECK(great_circle_distance({0, 0}, {180, 0}) == Approx(180.0).epsilon(1e-14));
    CHECK(great_circle_distance({0, 45}, {180, 45}) == Approx(90.0).epsilon(1e-14));
    CHECK(great_circle_distance({10, 10}, {10, 10}) == 0.0);
}

TEST_CASE("distance symmetry and triangle inequality") {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const GeoCoord a = random_geo(rng), b = random_geo(rng), c = random_geo(rng);
        const double ab = great_circle_distance(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= 180.0);
        CHECK(std::abs(ab - great_circle_distance(b, a)) <= 1e-9);
        CHECK(great_circle_distance(a, c) <= ab + great_circle_distance(b, c) + 1e-9);
    }
}

TEST_CASE("initial_bearing examples") {
    CHECK(initial_bearing({0, 0}, {0, 90}) == Approx(0.0));
    CHECK(initial_bearing({0, 0}, {90, 0}) == Approx(90.0));
    CHECK(initial_bearing({0, 0}, {-90, 0}) == Approx(270.0));
    CHECK_THROWS_AS(initial_bearing({10, 20}, {10, 20}), AntipodalOrCoincident);
    CHECK_THROWS_AS(initial_bearing({0, 0}, {180, 0}), AntipodalOrCoincident);
}

TEST_CASE("destination examples") {
    const GeoCoord east = destination({0, 0}, 90, 90);
    CHECK(east.lon() == Approx(90.0));
    CHECK(east.lat() == Approx(0.0).epsilon(1e-12));
    const GeoCoord pole = destination({0, 0}, 0, 90);
    CHECK(pole.lat() == Approx(90.0));

    const GeoCoord start(10, 20);
    const GeoCoord p = destination(start, 37, 25);
    CHECK(std::abs(great_circle_distance(start, p) - 25.0) <= 1e-9);
    CHECK(std::abs(initial_bearing(start, p) - 37.0) <= 1e-9);
}

TEST_CASE("destination / distance / bearing round trip") {
    Rng rng(5);
    for (int i = 0; i < 5000; ++i) {
        const GeoCoord s = random_geo(rng);
        if (std::abs(s.lat()) > 89.999) continue;
        const double brg = rng.uniform(0.0, 360.0);
        const double d = rng.uniform(0.001, 179.0);
        const GeoCoord e = destination(s, brg, d);
        CHECK(std::abs(great_circle_distance(s, e) - d) <= 1e-9);
        double diff = std::fmod(std::abs(initial_bearing(s, e) - brg), 360.0);
        diff = std::min(diff, 360.0 - diff);
        CHECK(diff <= 1e-9);
    }
}

TEST_CASE("cross_track_distance examples") {
    CHECK(cross_track_distance({0, 0}, 90, {90, 0}) == Approx(0.0).epsilon(1e-12));
    CHECK(cross_track_distance({0, 0}, 90, {90, 10}) == Approx(10.0));
    CHECK(cross_track_distance({0, 0}, 90, {90, -10}) == Approx(-10.0));
    CHECK_THROWS_AS(cross_track_distance({0, 0}, NAN, {1, 1}), DegeneratePath);
}

TEST_CASE("cross_track_distance vanishes along the path") {
    Rng rng(17);
    for (int i = 0; i < 2000; ++i) {
        const GeoCoord s = random_geo(rng);
        const double brg = rng.uniform(0.0, 360.0);
        const GeoCoord t = destination(s, brg, rng.uniform(1.0, 170.0));
        CHECK(std::abs(cross_track_distance(s, brg, t)) <= 1e-9);
    }
}

TEST_CASE("polygon_area octant and orientation") {
    const std::vector<GeoCoord> oct{{0, 0}, {90, 0}, {0, 90}};
    CHECK(std::abs(polygon_area(SphericalPolygon(oct)) - kPi / 2) <= 1e-12);
    const std::vector<GeoCoord> rev{{0, 90}, {90, 0}, {0, 0}};
    CHECK(std::abs(polygon_area(SphericalPolygon(rev)) - kPi / 2) <= 1e-12);
}

TEST_CASE("polygon_area rejects degenerate input") {
    CHECK_THROWS_AS(SphericalPolygon({{0, 0}, {1, 0}}), DegeneratePolygon);
    CHECK_THROWS_AS(polygon_area(SphericalPolygon({{0, 0}, {0, 0}, {1, 1}})), DegeneratePolygon);
    CHECK_THROWS_AS(polygon_area(SphericalPolygon({{0, 0}, {10, 0}, {20, 0}})), DegeneratePolygon);
}

TEST_CASE("polygon_area of a regular octagon against Monte-Carlo") {
    const GeoCoord centre(30, 40);
    std::vector<GeoCoord> ring;
    for (int i = 0; i < 8; ++i) ring.push_back(destination(centre, -45.0 * i, 8.0));
    const double area = polygon_area(SphericalPolygon(ring));
    const double mc = oracle::monte_carlo_area(ring, centre, 8.5, 10'000'000, 2024);
    CHECK(std::abs(area - mc) / mc < 0.005);
    // Closed form as well: 8 isosceles triangles with 8-degree legs and a
    // 45-degree apex.
    CHECK(std::abs(area - oracle::regular_polygon_area(8, 8.0)) <= 1e-12);
}

TEST_CASE("polygon_area invariant under rotation") {
    Rng rng(3);
    const std::vector<GeoCoord> ring{{0, 0}, {20, 5}, {25, 25}, {-5, 30}};
    const double a0 = polygon_area(SphericalPolygon(ring));
    for (int i = 0; i < 200; ++i) {
        const SphericalRotation r{rng.uniform(-180, 180), rng.uniform(-90, 90), rng.uniform(-180, 180)};
        std::vector<GeoCoord> rr;
        for (const auto& g : ring) rr.push_back(rotate(r, g));
        CHECK(std::abs(polygon_area(SphericalPolygon(rr)) - a0) / a0 <= 1e-9);
    }
}

TEST_CASE("rotate examples and convention") {
    const GeoCoord g = rotate({90, 0, 0}, {-90, 0});
    CHECK(g.lon() == Approx(0.0).epsilon(1e-12));
    CHECK(g.lat() == Approx(0.0).epsilon(1e-12));
    const GeoCoord h(12.5, -33.0);
    CHECK(rotate({0, 0, 0}, h) == h);
    const GeoCoord shifted = rotate({170, 0, 0}, {20, 10});
    CHECK(shifted.lon() == Approx(-170.0));
    CHECK(shifted.lat() == 10.0);

    // phi brings the south pole to the centre; the north pole goes to the edge.
    const GeoCoord sp = rotate({0, 90, 0}, {0, -90});
    CHECK(great_circle_distance(sp, {0, 0}) <= 1e-12);
    const GeoCoord np = rotate({0, 90, 0}, {0, 90});
    CHECK(great_circle_distance(np, {180, 0}) <= 1e-12);

    // gamma rolls about the view axis: north of the centre ends up west of it.
    const GeoCoord rolled = rotate({0, 0, 90}, {0, 10});
    CHECK(great_circle_distance(rolled, {-10, 0}) <= 1e-12);
}

TEST_CASE("rotate is an isometry and inverse_rotate undoes it") {
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
        const SphericalRotation r{rng.uniform(-180, 180), rng.uniform(-180, 180), rng.uniform(-180, 180)};
        const GeoCoord a = random_geo(rng), b = random_geo(rng);
        const double d0 = great_circle_distance(a, b);
        CHECK(std::abs(great_circle_distance(rotate(r, a), rotate(r, b)) - d0) <= 1e-9);
        CHECK(great_circle_distance(inverse_rotate(r, rotate(r, a)), a) <= 1e-9);
    }
}

TEST_CASE("rotation_from_matrix recovers the angles") {
    Rng rng(21);
    for (int i = 0; i < 500; ++i) {
        const SphericalRotation r{rng.uniform(-180, 180), rng.uniform(-89, 89), rng.uniform(-180, 180)};
        const SphericalRotation back = rotation_from_matrix(r.matrix());
        CHECK(back.lambda == Approx(r.lambda).epsilon(1e-9));
        CHECK(back.phi == Approx(r.phi).epsilon(1e-9));
        CHECK(back.gamma == Approx(r.gamma).epsilon(1e-9));
    }
}

TEST_CASE("uniform_sphere_sample statistics and determinism") {
    Rng rng(42);
    const int n = 1'000'000;
    double sum_sin = 0.0;
    int above30 = 0;
    for (int i = 0; i < n; ++i) {
        const GeoCoord g = uniform_sphere_sample(rng);
        sum_sin += std::sin(radians(g.lat()));
        if (g.lat() > 30.0) ++above30;
    }
    CHECK(std::abs(sum_sin / n) < 0.005);
    CHECK(std::abs(static_cast<double>(above30) / n - 0.25) < 0.005);

    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(uniform_sphere_sample(a) == uniform_sphere_sample(b));
}
