#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "terralens/scene.hpp"

using namespace terralens;
using doctest::Approx;

namespace {

SphericalRotation random_rotation(Rng& rng) {
    return {rng.uniform(-180, 180), rng.uniform(-90, 90), rng.uniform(-180, 180)};
}

double chord(const oracle::V3& a, const oracle::V3& b) {
    return std::sqrt(std::pow(a[0] - b[0], 2) + std::pow(a[1] - b[1], 2) + std::pow(a[2] - b[2], 2));
}

void check_world(const WorldPoint& p, double x, double y, double z, double tol = 1e-12) {
    CHECK(std::abs(p.x - x) <= tol);
    CHECK(std::abs(p.y - y) <= tol);
    CHECK(std::abs(p.z - z) <= tol);
}

}  // namespace

TEST_CASE("default scene parameters are the study's") {
    const SceneParams p;
    CHECK(p.exo_radius == 0.4);
    CHECK(p.exo_distance == 1.0);
    CHECK(p.flat_width == 1.0);
    CHECK(p.flat_height == 0.5);
    CHECK(p.flat_distance == 1.0);
    CHECK(p.ego_radius == 8.0);
    CHECK(p.ego_viewer_fraction == 0.8);
    CHECK(p.curved_radius == 1.0);
    CHECK(p.curved_span_h == 108.0);
    CHECK(p.curved_span_v == 54.0);
    const SceneEmbedding ego{SceneKind::Egocentric, {}, p};
    CHECK(distance(ego.ego_center(), {0, 0, 0}) == Approx(0.8 * 8.0).epsilon(1e-15));
}

TEST_CASE("scene kind names round trip") {
    for (SceneKind k : kAllSceneKinds) CHECK(scene_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(scene_kind_from_string("globe"), InvalidArgument);
}

TEST_CASE("(0,0) faces the viewer in every scene") {
    check_world(embed({SceneKind::Exocentric, {}, {}}, {0, 0}), 0, 0, -0.6);
    check_world(embed({SceneKind::FlatMap, {}, {}}, {0, 0}), 0, 0, -1.0);
    check_world(embed({SceneKind::CurvedMap, {}, {}}, {0, 0}), 0, 0, -1.0);
    check_world(embed({SceneKind::Egocentric, {}, {}}, {0, 0}), 0, 0, -14.4);
}

TEST_CASE("map scenes fill their surfaces") {
    const SceneEmbedding flat{SceneKind::FlatMap, {}, {}};
    check_world(embed(flat, {180, 0}), 0.5, 0, -1.0);
    check_world(embed(flat, {-180, 0}), -0.5, 0, -1.0);
    check_world(embed(flat, {0, 90}), 0, 0.25, -1.0);
    const SceneEmbedding curved{SceneKind::CurvedMap, {}, {}};
    const double h = oracle::rad(54.0), v = oracle::rad(27.0);
    check_world(embed(curved, {180, 0}), std::sin(h), 0, -std::cos(h));
    check_world(embed(curved, {0, 90}), 0, std::sin(v), -std::cos(v));
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const GeoCoord g = uniform_sphere_sample(rng);
        const WorldPoint c = embed({SceneKind::CurvedMap, random_rotation(rng), {}}, g);
        CHECK(distance(c, {0, 0, 0}) == Approx(1.0).epsilon(1e-14));
        const WorldPoint f = embed({SceneKind::FlatMap, random_rotation(rng), {}}, g);
        CHECK(f.z == -1.0);
        CHECK(std::abs(f.x) <= 0.5 + 1e-12);
        CHECK(std::abs(f.y) <= 0.25 + 1e-12);
    }
}

TEST_CASE("globes are scaled isometries") {
    Rng rng(8);
    for (SceneKind kind : {SceneKind::Exocentric, SceneKind::Egocentric}) {
        const SceneEmbedding s{kind, random_rotation(rng), {}};
        const double radius = kind == SceneKind::Exocentric ? 0.4 : 8.0;
        for (int i = 0; i < 500; ++i) {
            const GeoCoord a = uniform_sphere_sample(rng), b = uniform_sphere_sample(rng);
            const double sphere = chord(oracle::vec(a), oracle::vec(b));
            if (sphere < 1e-3) continue;
            CHECK(distance(embed(s, a), embed(s, b)) / sphere == Approx(radius).epsilon(1e-9));
        }
    }
}

TEST_CASE("unembed inverts embed on every scene") {
    Rng rng(13);
    for (SceneKind kind : kAllSceneKinds) {
        for (int i = 0; i < 300; ++i) {
            const SceneEmbedding s{kind, random_rotation(rng), {}};
            GeoCoord g = uniform_sphere_sample(rng);
            if (std::abs(g.lat()) > 89.9) continue;
            const GeoCoord back = unembed(s, embed(s, g));
            CHECK(great_circle_distance(g, back) < 1e-7);
        }
    }
    CHECK_THROWS_AS(unembed({SceneKind::Exocentric, {}, {}}, {0, 0, 0}), Unreachable);
    CHECK_THROWS_AS(unembed({SceneKind::FlatMap, {}, {}}, {0.49, 0.24, -1.0}), Unreachable);
    CHECK_THROWS_AS(unembed({SceneKind::FlatMap, {}, {}}, {0.0, 0.0, -0.9}), Unreachable);
}

TEST_CASE("solve_recenter keeps a grabbed point at its target") {
    SUBCASE("fixed point") {
        const SceneEmbedding s{SceneKind::Exocentric, {20, -10, 5}, {}};
        const GeoCoord g(30, 40);
        const SphericalRotation r = solve_recenter(s, g, embed(s, g));
        CHECK(r.lambda == Approx(20.0));
        CHECK(r.phi == Approx(-10.0));
        CHECK(r.gamma == 5.0);
    }
    SUBCASE("flat map drag of the centre onto (90,0)") {
        const SceneEmbedding s{SceneKind::FlatMap, {}, {}};
        const WorldPoint target = embed(s, {90, 0});
        const SphericalRotation r = solve_recenter(s, {0, 0}, target);
        CHECK(distance(embed({SceneKind::FlatMap, r, {}}, {0, 0}), target) < 1e-6);
        CHECK(r.lambda == Approx(90.0));
        CHECK(r.phi == Approx(0.0));
        CHECK(r.gamma == 0.0);
    }
    SUBCASE("exocentric drag to the front") {
        Rng rng(21);
        for (int i = 0; i < 100; ++i) {
            const SceneEmbedding s{SceneKind::Exocentric, {rng.uniform(-180, 180), rng.uniform(-90, 90), 0.0}, {}};
            const GeoCoord g = uniform_sphere_sample(rng);
            const SphericalRotation r = solve_recenter(s, g, {0, 0, -0.6});
            check_world(embed({SceneKind::Exocentric, r, {}}, g), 0, 0, -0.6, 1e-6);
        }
    }
    SUBCASE("randomized reachable drags on all scenes") {
        Rng rng(34);
        for (SceneKind kind : kAllSceneKinds) {
            int checked = 0;
            while (checked < 250) {
                const double gamma = rng.uniform(-180, 180);
                const SceneEmbedding s{kind, {rng.uniform(-180, 180), rng.uniform(-90, 90), gamma}, {}};
                const GeoCoord g = uniform_sphere_sample(rng);
                // Targets reachable without roll: where some other (lambda, phi) puts g.
                const SphericalRotation other{rng.uniform(-180, 180), rng.uniform(-90, 90), gamma};
                const GeoCoord f = rotate(other, g);
                if (std::abs(f.lat()) > 89.0 || std::abs(f.lon()) > 179.0) continue;
                const WorldPoint target = embed({kind, other, {}}, g);
                const SphericalRotation r = solve_recenter(s, g, target);
                CHECK(r.gamma == gamma);
                CHECK(distance(embed({kind, r, {}}, g), target) < 1e-6);
                ++checked;
            }
        }
    }
    SUBCASE("targets that need a roll are unreachable") {
        // Without roll, (0,80) only reaches frame points whose unrolled y
        // component is at most cos 80 in magnitude: frame (90,0) is out of reach.
        const SceneEmbedding s{SceneKind::Exocentric, {}, {}};
        CHECK_NOTHROW(solve_recenter(s, {0, 80}, {0, 0, -0.6}));
        CHECK_THROWS_AS(solve_recenter(s, {0, 80}, {0.4, 0, -1.0}), Unreachable);
        const SceneEmbedding rolled{SceneKind::Exocentric, {0, 0, 90}, {}};
        CHECK_NOTHROW(solve_recenter(rolled, {0, 80}, {0.4, 0, -1.0}));
        CHECK_THROWS_AS(solve_recenter(s, {0, 0}, {0, 0, -0.5}), Unreachable);
    }
}

TEST_CASE("morph endpoints are exact and the path is linear") {
    Rng rng(55);
    for (int i = 0; i < 500; ++i) {
        const SphericalRotation r = random_rotation(rng);
        const GeoCoord g = uniform_sphere_sample(rng);
        const WorldPoint flat = embed({SceneKind::FlatMap, r, {}}, g);
        const WorldPoint exo = embed({SceneKind::Exocentric, r, {}}, g);
        CHECK(morph(0.0, g, r) == flat);
        CHECK(morph(1.0, g, r) == exo);
        const WorldPoint mid = morph(0.5, g, r);
        CHECK(mid.x == Approx((flat.x + exo.x) / 2).epsilon(1e-14));
        CHECK(mid.y == Approx((flat.y + exo.y) / 2).epsilon(1e-14));
        CHECK(mid.z == Approx((flat.z + exo.z) / 2).epsilon(1e-14));
    }
    CHECK_THROWS_AS(morph(-0.1, {0, 0}, {}), InvalidArgument);
    CHECK_THROWS_AS(morph(1.5, {0, 0}, {}), InvalidArgument);
}

TEST_CASE("graticule line counts") {
    const auto g10 = graticule(10);
    int meridians = 0, parallels = 0, emphasized = 0;
    for (const GraticuleLine& l : g10) {
        (l.kind == GraticuleKind::Meridian ? meridians : parallels)++;
        if (l.emphasized) {
            ++emphasized;
            CHECK(l.kind == GraticuleKind::Parallel);
            CHECK(l.value == 0.0);
        }
        CHECK_FALSE(l.path.closed);
    }
    CHECK(meridians == 36);
    CHECK(parallels == 17);
    CHECK(emphasized == 1);
    int m30 = 0, p30 = 0;
    for (const GraticuleLine& l : graticule(30)) (l.kind == GraticuleKind::Meridian ? m30 : p30)++;
    CHECK(m30 == 12);
    CHECK(p30 == 5);
    CHECK_THROWS_AS(graticule(7), InvalidArgument);
    CHECK_THROWS_AS(graticule(0), InvalidArgument);
}

TEST_CASE("rotated parallels stay equidistant from the rotated pole") {
    Rng rng(89);
    for (int trial = 0; trial < 20; ++trial) {
        const SphericalRotation r = random_rotation(rng);
        const GeoCoord pole = rotate(r, {0, 90});
        for (const GraticuleLine& l : graticule(30)) {
            if (l.kind != GraticuleKind::Parallel) continue;
            for (const auto& seg : prepare_path(l.path, r).segments) {
                for (const GeoCoord& f : seg) {
                    CHECK(great_circle_distance(f, pole) == Approx(90.0 - l.value).epsilon(2e-4));
                }
            }
        }
    }
}

TEST_CASE("horizon rings are fixed in the world") {
    const SceneParams p;
    const auto base = horizon_rings(p);
    const SceneEmbedding ego{SceneKind::Egocentric, {}, p};
    for (const HorizonRing& ring : base) {
        for (const WorldPoint& w : ring_points(ring, 64)) {
            CHECK(distance(w, ego.ego_center()) == Approx(8.0).epsilon(1e-12));
        }
        CHECK(std::abs(ring.latitude) == 30.0);
        CHECK(ring.center.y == Approx(8.0 * std::sin(oracle::rad(ring.latitude))).epsilon(1e-14));
    }
    Rng rng(144);
    for (int i = 0; i < 1000; ++i) {
        const SceneEmbedding s{SceneKind::Egocentric, random_rotation(rng), p};
        const auto rings = horizon_rings(s.params);
        for (int k = 0; k < 2; ++k) {
            CHECK(rings[k].center == base[k].center);
            CHECK(rings[k].radius == base[k].radius);
        }
    }
    CHECK_THROWS_AS(ring_points(base[0], 2), InvalidArgument);
}
