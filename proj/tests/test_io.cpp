#include "doctest.h"

#include <sstream>

#include "oracles.hpp"
#include "terralens/io.hpp"

using namespace terralens;
using doctest::Approx;

namespace {

const char* kCollection = R"({
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature", "properties": {},
     "geometry": {"type": "Polygon",
                  "coordinates": [[[-10, -10], [10, -10], [10, 10], [-10, 10], [-10, -10]],
                                  [[-2, -2], [2, -2], [2, 2], [-2, 2], [-2, -2]]]}},
    {"type": "Feature", "properties": {},
     "geometry": {"type": "MultiPolygon",
                  "coordinates": [[[[100, 0], [110, 0], [110, 5], [100, 0]]]]}},
    {"type": "Feature", "properties": null,
     "geometry": {"type": "LineString", "coordinates": [[170, 0], [-170, 5]]}}
  ]
})";

}  // namespace

TEST_CASE("GeoJSON geometries become paths") {
    const Coastlines c = parse_geojson(kCollection);
    REQUIRE(c.paths.size() == 3u);
    CHECK(c.paths[0].closed);
    REQUIRE(c.paths[0].segments.size() == 2u);  // outer ring and hole
    CHECK(c.paths[0].segments[0].size() == 4u);  // closing position dropped
    CHECK(c.paths[1].closed);
    CHECK(c.paths[1].segments[0].size() == 3u);
    CHECK_FALSE(c.paths[2].closed);
    CHECK(c.paths[2].segments[0][1].lon() == -170.0);
}

TEST_CASE("bare geometries are accepted") {
    CHECK(parse_geojson(R"({"type":"LineString","coordinates":[[0,0],[1,1]]})").paths.size() == 1u);
    CHECK(parse_geojson(R"({"type":"MultiLineString","coordinates":[[[0,0],[1,1]],[[2,2],[3,3]]]})").paths.size() == 2u);
    CHECK(parse_geojson(R"({"type":"GeometryCollection","geometries":[{"type":"LineString","coordinates":[[0,0],[1,1]]}]})")
              .paths.size() == 1u);
}

TEST_CASE("malformed GeoJSON is a parse error") {
    CHECK_THROWS_AS(parse_geojson("{"), ParseError);
    CHECK_THROWS_AS(parse_geojson("[]"), ParseError);
    CHECK_THROWS_AS(parse_geojson(R"({"type":"Polygon"})"), ParseError);
    CHECK_THROWS_AS(parse_geojson(R"({"type":"Polygon","coordinates":[[[0,0],[1,1]]]})"), ParseError);
    CHECK_THROWS_AS(parse_geojson(R"({"type":"LineString","coordinates":[[0,95],[1,1]]})"), ParseError);
    CHECK_THROWS_AS(parse_geojson(R"({"type":"LineString","coordinates":[["a",0],[1,1]]})"), ParseError);
    CHECK_THROWS_AS(parse_geojson(R"({"type":"Circle","coordinates":[0,0]})"), ParseError);
    CHECK(parse_geojson(R"({"type":"Point","coordinates":[0,0]})").paths.empty());
    CHECK_THROWS_AS(read_geojson("/nonexistent/coast.geojson"), ParseError);
}

TEST_CASE("land mask uses even-odd rings") {
    const LandMask mask(parse_geojson(kCollection));
    CHECK(mask.contains({5, 5}));
    CHECK_FALSE(mask.contains({0, 0}));  // hole
    CHECK_FALSE(mask.contains({50, 0}));
    CHECK(mask.contains({108, 2}));
    const SurfaceClassifier f = mask.classifier();
    CHECK(f({-8, 8}));
}

TEST_CASE("responses CSV") {
    std::istringstream in(
        "participant,visualisation,task,difficulty,stimulus_id,chosen,correct,response_time\n"
        "0,flat,distance,easy,s000,AB,1,3.25\n"
        "\n"
        "1, curved ,area,far-distance,s001,B,false,10\n");
    const auto r = parse_responses_csv(in);
    REQUIRE(r.size() == 2u);
    CHECK(r[0].participant == 0);
    CHECK(r[0].correct);
    CHECK(r[0].response_time == 3.25);
    CHECK(r[1].visualisation == "curved");
    CHECK_FALSE(r[1].correct);

    std::istringstream reordered(
        "correct,response_time,participant,visualisation,task,difficulty,stimulus_id,chosen\n"
        "true,2,3,exocentric,direction,close,s5,hit\n");
    const auto r2 = parse_responses_csv(reordered);
    CHECK(r2[0].participant == 3);
    CHECK(r2[0].chosen == "hit");
}

TEST_CASE("malformed responses CSV") {
    const std::string header = "participant,visualisation,task,difficulty,stimulus_id,chosen,correct,response_time\n";
    for (const std::string body : {"0,flat,distance,easy,s0,AB,1\n", "x,flat,distance,easy,s0,AB,1,2\n",
                                   "0,flat,distance,easy,s0,AB,maybe,2\n", "0,flat,distance,easy,s0,AB,1,-2\n",
                                   "0,flat,distance,easy,s0,AB,1,abc\n"}) {
        std::istringstream in(header + body);
        CHECK_THROWS_AS(parse_responses_csv(in), ParseError);
    }
    std::istringstream missing("participant,task\n0,distance\n");
    CHECK_THROWS_AS(parse_responses_csv(missing), ParseError);
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_responses_csv(empty), ParseError);
}

TEST_CASE("pose log CSV") {
    std::istringstream in(
        "t,head_x,head_y,head_z,head_qw,head_qx,head_qy,head_qz,ctrl_x,ctrl_y,ctrl_z,ctrl_qw,ctrl_qx,ctrl_qy,ctrl_qz\n"
        "0,0,1.6,0,1,0,0,0,0.2,1.2,-0.3,1,0,0,0\n"
        "0.1,0,1.6,0.1,1,0,0,0,0.2,1.2,-0.3,0.7071067811865476,0.7071067811865476,0,0\n");
    const auto log = parse_pose_log_csv(in);
    REQUIRE(log.size() == 2u);
    CHECK(log[1].head_pos.z == 0.1);
    CHECK(log[1].controller_rot.x == Approx(std::sqrt(0.5)));
    std::istringstream bad("t,head_x\n0,0\n");
    CHECK_THROWS_AS(parse_pose_log_csv(bad), ParseError);
    CHECK(pose_log_name(3, "s017") == "p3_s017.csv");
}

TEST_CASE("scene JSON round trip") {
    SceneParams p;
    p.exo_radius = 0.5;
    const SceneEmbedding s{SceneKind::Egocentric, {10, -20, 30}, p};
    const Json j = to_json(s);
    CHECK(j["kind"] == "egocentric");
    CHECK(j["rotation"] == Json::array({10.0, -20.0, 30.0}));
    CHECK(j["horizon_rings"].size() == 2u);
    const SceneEmbedding back = scene_from_json(j);
    CHECK(back.kind == s.kind);
    CHECK(back.rotation.lambda == 10.0);
    CHECK(back.params == p);
    CHECK_THROWS_AS(scene_from_json(Json{{"kind", "cube"}, {"rotation", {0, 0, 0}}}), ParseError);
    CHECK_THROWS_AS(scene_from_json(Json{{"kind", "flat"}, {"rotation", {0, 0}}}), ParseError);
    CHECK_FALSE(to_json(SceneEmbedding{SceneKind::FlatMap, {}, {}}).contains("horizon_rings"));
}

TEST_CASE("task JSON carries truth and metadata") {
    Rng rng = Rng::for_stream(9, 4);
    const Task t = gen_distance_task(Difficulty::SmallVariation, rng);
    const Json j = task_to_json(t, 9, 4);
    CHECK(j["family"] == "distance");
    CHECK(j["difficulty"] == "small-variation");
    CHECK(j["seed"] == 9);
    CHECK(j["stream"] == 4);
    CHECK(j["cv"].get<double>() == Approx(0.05).epsilon(1e-9));
    CHECK(j["separation"].get<double>() == Approx(60.0));
    const auto& d = std::get<DistanceTask>(t);
    CHECK(j["truth"] == (d.truth == 0 ? "AB" : "XY"));
    CHECK(j["payload"]["A"][0].get<double>() == d.pair_ab[0].lon());

    Rng rng2(1);
    const Json dj = task_to_json(gen_direction_task(DirectionCondition::Far, DirectionTruth::Miss, rng2), 1, 0);
    CHECK(dj["truth"] == "miss");
    CHECK(dj["difficulty"] == "far");
    CHECK(dj["cv"].is_null());
}

TEST_CASE("session JSON lists 108 stimuli") {
    const Json j = to_json(build_session(0, 1));
    CHECK(j["stimuli"].size() == 108u);
    CHECK(j["task_order"] == Json::array({"distance", "area", "direction"}));
    CHECK(j["visualisation_order"].size() == 4u);
    CHECK(j["stimuli"][0]["index"] == 0);
    CHECK(j["stimuli"][107]["family"] == "direction");
}

TEST_CASE("golden vectors reproduce embed") {
    const std::vector<SphericalRotation> rotations{{0, 0, 0}, {30, -20, 10}};
    const Json j = golden_vectors(rotations);
    CHECK(j["tolerance_m"] == 1e-6);
    REQUIRE(j["scenes"].size() == 8u);
    for (const Json& scene : j["scenes"]) {
        CHECK(scene["samples"].size() >= 100u);
        const SceneEmbedding s = scene_from_json(scene);
        for (const Json& sample : scene["samples"]) {
            const GeoCoord g(sample["geo"][0].get<double>(), sample["geo"][1].get<double>());
            const WorldPoint w = embed(s, g);
            CHECK(w.x == sample["world"][0].get<double>());
            CHECK(w.y == sample["world"][1].get<double>());
            CHECK(w.z == sample["world"][2].get<double>());
        }
    }
}
