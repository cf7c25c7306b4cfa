#include "terralens/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace terralens {

namespace {

// ---- GeoJSON helpers

GeoCoord position(const Json& p) {
    if (!p.is_array() || p.size() < 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ParseError("GeoJSON: position must be [lon, lat]");
    }
    const double lon = p[0].get<double>();
    const double lat = p[1].get<double>();
    if (!std::isfinite(lon) || !std::isfinite(lat) || lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0) {
        throw ParseError("GeoJSON: position out of range");
    }
    return GeoCoord(lon, lat);
}

std::vector<GeoCoord> positions(const Json& arr) {
    if (!arr.is_array()) throw ParseError("GeoJSON: expected an array of positions");
    std::vector<GeoCoord> out;
    out.reserve(arr.size());
    for (const Json& p : arr) {
        GeoCoord g = position(p);
        if (!out.empty() && out.back() == g) continue;
        out.push_back(g);
    }
    return out;
}

void add_polygon(Coastlines& c, const Json& rings) {
    if (!rings.is_array()) throw ParseError("GeoJSON: Polygon coordinates must be an array of rings");
    GeoPath path;
    path.closed = true;
    for (const Json& ring : rings) {
        std::vector<GeoCoord> pts = positions(ring);
        if (pts.size() >= 2 && pts.front() == pts.back()) pts.pop_back();
        if (pts.size() < 3) throw ParseError("GeoJSON: ring with fewer than 3 distinct positions");
        path.segments.push_back(std::move(pts));
    }
    if (!path.segments.empty()) c.paths.push_back(std::move(path));
}

void add_line(Coastlines& c, const Json& coords) {
    std::vector<GeoCoord> pts = positions(coords);
    if (pts.size() < 2) throw ParseError("GeoJSON: LineString with fewer than 2 positions");
    GeoPath path;
    path.segments.push_back(std::move(pts));
    c.paths.push_back(std::move(path));
}

void add_geometry(Coastlines& c, const Json& g) {
    if (g.is_null()) return;
    if (!g.is_object() || !g.contains("type") || !g["type"].is_string()) {
        throw ParseError("GeoJSON: geometry without a type");
    }
    const std::string type = g["type"].get<std::string>();
    if (type == "GeometryCollection") {
        if (!g.contains("geometries") || !g["geometries"].is_array()) throw ParseError("GeoJSON: bad GeometryCollection");
        for (const Json& sub : g["geometries"]) add_geometry(c, sub);
        return;
    }
    if (!g.contains("coordinates")) throw ParseError("GeoJSON: geometry without coordinates");
    const Json& coords = g["coordinates"];
    if (type == "Polygon") {
        add_polygon(c, coords);
    } else if (type == "MultiPolygon") {
        if (!coords.is_array()) throw ParseError("GeoJSON: bad MultiPolygon");
        for (const Json& poly : coords) add_polygon(c, poly);
    } else if (type == "LineString") {
        add_line(c, coords);
    } else if (type == "MultiLineString") {
        if (!coords.is_array()) throw ParseError("GeoJSON: bad MultiLineString");
        for (const Json& line : coords) add_line(c, line);
    } else if (type == "Point" || type == "MultiPoint") {
        // Nothing to draw as a coastline.
    } else {
        throw ParseError("GeoJSON: unsupported geometry type " + type);
    }
}

void add_object(Coastlines& c, const Json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) throw ParseError("GeoJSON: object without a type");
    const std::string type = j["type"].get<std::string>();
    if (type == "FeatureCollection") {
        if (!j.contains("features") || !j["features"].is_array()) throw ParseError("GeoJSON: bad FeatureCollection");
        for (const Json& f : j["features"]) add_object(c, f);
    } else if (type == "Feature") {
        if (!j.contains("geometry")) throw ParseError("GeoJSON: Feature without geometry");
        add_geometry(c, j["geometry"]);
    } else {
        add_geometry(c, j);
    }
}

// ---- CSV helpers

std::string trim(std::string s) {
    const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw ParseError("CSV line " + std::to_string(line_no) + ": not a number: '" + s + "'");
    }
    return v;
}

int parse_int(const std::string& s, std::size_t line_no) {
    const double v = parse_number(s, line_no);
    if (v != std::floor(v) || v < 0 || v > 1e9) {
        throw ParseError("CSV line " + std::to_string(line_no) + ": not a participant id: '" + s + "'");
    }
    return static_cast<int>(v);
}

bool parse_bool(const std::string& s, std::size_t line_no) {
    if (s == "1" || s == "true" || s == "TRUE" || s == "True") return true;
    if (s == "0" || s == "false" || s == "FALSE" || s == "False") return false;
    throw ParseError("CSV line " + std::to_string(line_no) + ": not a boolean: '" + s + "'");
}

// Reads a header and maps required column names to indices.
struct Table {
    std::map<std::string, std::size_t> columns;
    std::size_t width = 0;
};

Table read_header(std::istream& in, const std::vector<std::string>& required) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("CSV: missing header");
    const auto names = split_row(trim(line));
    Table t;
    t.width = names.size();
    for (std::size_t i = 0; i < names.size(); ++i) t.columns[names[i]] = i;
    for (const auto& r : required) {
        if (!t.columns.contains(r)) throw ParseError("CSV: missing column '" + r + "'");
    }
    return t;
}

std::ifstream open_or_throw(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open " + file.string());
    return in;
}

Json pair_json(double a, double b) { return Json::array({a, b}); }

}  // namespace

Coastlines parse_geojson(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("GeoJSON: ") + e.what());
    }
    Coastlines c;
    try {
        add_object(c, j);
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("GeoJSON: ") + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("GeoJSON: ") + e.what());
    }
    return c;
}

Coastlines read_geojson(const std::filesystem::path& file) {
    std::ifstream in = open_or_throw(file);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_geojson(ss.str());
}

LandMask::LandMask(const Coastlines& coast) {
    for (const GeoPath& p : coast.paths) {
        if (!p.closed) continue;
        for (const auto& ring : p.segments) rings_.push_back(ring);
    }
}

bool LandMask::contains(const GeoCoord& g) const {
    bool inside = false;
    for (const auto& ring : rings_) {
        const std::size_t n = ring.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const GeoCoord& a = ring[i];
            const GeoCoord& b = ring[j];
            if ((a.lat() > g.lat()) != (b.lat() > g.lat())) {
                const double x = a.lon() + (g.lat() - a.lat()) * (b.lon() - a.lon()) / (b.lat() - a.lat());
                if (g.lon() < x) inside = !inside;
            }
        }
    }
    return inside;
}

SurfaceClassifier LandMask::classifier() const {
    return [this](const GeoCoord& g) { return contains(g); };
}

std::vector<ResponseRecord> parse_responses_csv(std::istream& in) {
    const std::vector<std::string> cols{"participant", "visualisation", "task", "difficulty",
                                        "stimulus_id", "chosen",        "correct", "response_time"};
    const Table t = read_header(in, cols);
    std::vector<ResponseRecord> out;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const auto f = split_row(line);
        if (f.size() != t.width) throw ParseError("CSV line " + std::to_string(line_no) + ": wrong field count");
        auto at = [&](const char* name) -> const std::string& { return f[t.columns.at(name)]; };
        ResponseRecord r;
        r.participant = parse_int(at("participant"), line_no);
        r.visualisation = at("visualisation");
        r.task = at("task");
        r.difficulty = at("difficulty");
        r.stimulus_id = at("stimulus_id");
        r.chosen = at("chosen");
        r.correct = parse_bool(at("correct"), line_no);
        r.response_time = parse_number(at("response_time"), line_no);
        if (!(r.response_time > 0.0)) {
            throw ParseError("CSV line " + std::to_string(line_no) + ": response_time must be positive");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ResponseRecord> read_responses_csv(const std::filesystem::path& file) {
    std::ifstream in = open_or_throw(file);
    return parse_responses_csv(in);
}

std::vector<PoseSample> parse_pose_log_csv(std::istream& in) {
    const std::vector<std::string> cols{"t",      "head_x", "head_y",  "head_z",  "head_qw",
                                        "head_qx", "head_qy", "head_qz", "ctrl_x",  "ctrl_y",
                                        "ctrl_z",  "ctrl_qw", "ctrl_qx", "ctrl_qy", "ctrl_qz"};
    const Table t = read_header(in, cols);
    std::vector<PoseSample> out;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const auto f = split_row(line);
        if (f.size() != t.width) throw ParseError("CSV line " + std::to_string(line_no) + ": wrong field count");
        auto num = [&](const char* name) { return parse_number(f[t.columns.at(name)], line_no); };
        PoseSample s;
        s.t = num("t");
        s.head_pos = {num("head_x"), num("head_y"), num("head_z")};
        s.head_rot = {num("head_qw"), num("head_qx"), num("head_qy"), num("head_qz")};
        s.controller_pos = {num("ctrl_x"), num("ctrl_y"), num("ctrl_z")};
        s.controller_rot = {num("ctrl_qw"), num("ctrl_qx"), num("ctrl_qy"), num("ctrl_qz")};
        out.push_back(s);
    }
    return out;
}

std::vector<PoseSample> read_pose_log_csv(const std::filesystem::path& file) {
    std::ifstream in = open_or_throw(file);
    return parse_pose_log_csv(in);
}

std::string pose_log_name(int participant, const std::string& stimulus_id) {
    return "p" + std::to_string(participant) + "_" + stimulus_id + ".csv";
}

Json to_json(const GeoCoord& g) { return pair_json(g.lon(), g.lat()); }

Json to_json(const SphericalRotation& r) { return Json::array({r.lambda, r.phi, r.gamma}); }

Json to_json(const SceneParams& p) {
    return Json{{"exo_radius", p.exo_radius},
                {"exo_distance", p.exo_distance},
                {"flat_width", p.flat_width},
                {"flat_height", p.flat_height},
                {"flat_distance", p.flat_distance},
                {"ego_radius", p.ego_radius},
                {"ego_viewer_fraction", p.ego_viewer_fraction},
                {"ring_lat_upper", p.ring_lat_upper},
                {"ring_lat_lower", p.ring_lat_lower},
                {"curved_radius", p.curved_radius},
                {"curved_span_h", p.curved_span_h},
                {"curved_span_v", p.curved_span_v}};
}

Json to_json(const SceneEmbedding& s) {
    Json j{{"kind", std::string(to_string(s.kind))}, {"rotation", to_json(s.rotation)}, {"params", to_json(s.params)}};
    if (s.kind == SceneKind::Egocentric) {
        Json rings = Json::array();
        for (const HorizonRing& r : horizon_rings(s.params)) {
            rings.push_back({{"center", Json::array({r.center.x, r.center.y, r.center.z})},
                             {"radius", r.radius},
                             {"latitude", r.latitude}});
        }
        j["horizon_rings"] = std::move(rings);
    }
    return j;
}

SceneEmbedding scene_from_json(const Json& j) {
    try {
        SceneEmbedding s;
        s.kind = scene_kind_from_string(j.at("kind").get<std::string>());
        const Json& r = j.at("rotation");
        if (!r.is_array() || r.size() != 3) throw ParseError("scene: rotation must be [lambda, phi, gamma]");
        s.rotation = {r[0].get<double>(), r[1].get<double>(), r[2].get<double>()};
        if (j.contains("params")) {
            const Json& p = j["params"];
            auto read = [&](const char* key, double& field) {
                if (p.contains(key)) field = p[key].get<double>();
            };
            read("exo_radius", s.params.exo_radius);
            read("exo_distance", s.params.exo_distance);
            read("flat_width", s.params.flat_width);
            read("flat_height", s.params.flat_height);
            read("flat_distance", s.params.flat_distance);
            read("ego_radius", s.params.ego_radius);
            read("ego_viewer_fraction", s.params.ego_viewer_fraction);
            read("ring_lat_upper", s.params.ring_lat_upper);
            read("ring_lat_lower", s.params.ring_lat_lower);
            read("curved_radius", s.params.curved_radius);
            read("curved_span_h", s.params.curved_span_h);
            read("curved_span_v", s.params.curved_span_v);
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scene: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("scene: ") + e.what());
    }
}

Json task_to_json(const Task& task, std::uint64_t seed, std::uint64_t stream) {
    Json j;
    j["family"] = std::string(to_string(family_of(task)));
    if (const auto* d = std::get_if<DistanceTask>(&task)) {
        j["difficulty"] = std::string(to_string(d->difficulty));
        j["payload"] = {{"A", to_json(d->pair_ab[0])},
                        {"B", to_json(d->pair_ab[1])},
                        {"X", to_json(d->pair_xy[0])},
                        {"Y", to_json(d->pair_xy[1])},
                        {"distance_ab", great_circle_distance(d->pair_ab[0], d->pair_ab[1])},
                        {"distance_xy", great_circle_distance(d->pair_xy[0], d->pair_xy[1])}};
        j["truth"] = d->truth == 0 ? "AB" : "XY";
        j["seed"] = seed;
        j["stream"] = stream;
        j["cv"] = d->cv;
        j["separation"] = d->midpoint_separation;
    } else if (const auto* a = std::get_if<AreaTask>(&task)) {
        j["difficulty"] = std::string(to_string(a->difficulty));
        Json polys = Json::array();
        Json areas = Json::array();
        for (const SphericalPolygon& p : a->polygons) {
            Json ring = Json::array();
            for (const GeoCoord& g : p.vertices()) ring.push_back(to_json(g));
            polys.push_back(std::move(ring));
            areas.push_back(polygon_area(p));
        }
        j["payload"] = {{"labels", Json::array({"A", "B"})},
                        {"polygons", std::move(polys)},
                        {"centroids", Json::array({to_json(a->centroids[0]), to_json(a->centroids[1])})},
                        {"vertex_radius", kPolygonRadius},
                        {"areas_sr", std::move(areas)}};
        j["truth"] = a->truth == 0 ? "A" : "B";
        j["seed"] = seed;
        j["stream"] = stream;
        j["cv"] = a->cv;
        j["separation"] = a->centroid_separation;
    } else {
        const auto& t = std::get<DirectionTask>(task);
        j["difficulty"] = std::string(to_string(t.condition));
        j["payload"] = {{"arrow_start", to_json(t.arrow_start)},
                        {"arrow_bearing", t.arrow_bearing},
                        {"arrow_length", t.arrow_length},
                        {"arrow_end", to_json(destination(t.arrow_start, t.arrow_bearing, t.arrow_length))},
                        {"target", to_json(t.target)},
                        {"miss_offset", t.miss_offset}};
        j["truth"] = std::string(to_string(t.truth));
        j["seed"] = seed;
        j["stream"] = stream;
        j["cv"] = nullptr;
        j["separation"] = t.separation;
    }
    return j;
}

Json to_json(const Session& s) {
    Json order = Json::array();
    for (SceneKind k : s.visualisation_order) order.push_back(std::string(to_string(k)));
    Json stimuli = Json::array();
    for (const SessionBlock& b : s.blocks) {
        for (const Stimulus& st : b.stimuli) {
            Json j{{"index", st.index},
                   {"visualisation", std::string(to_string(st.visualisation))},
                   {"condition", std::string(st.condition)}};
            j.update(task_to_json(st.task, s.seed, st.stream));
            stimuli.push_back(std::move(j));
        }
    }
    return Json{{"participant", s.participant_index},
                {"seed", s.seed},
                {"task_order", Json::array({"distance", "area", "direction"})},
                {"visualisation_order", std::move(order)},
                {"stimuli", std::move(stimuli)}};
}

Json golden_vectors(const std::vector<SphericalRotation>& rotations, const SceneParams& params) {
    Json scenes = Json::array();
    for (const SphericalRotation& r : rotations) {
        for (SceneKind kind : kAllSceneKinds) {
            const SceneEmbedding s{kind, r, params};
            Json samples = Json::array();
            for (int lat = -75; lat <= 75; lat += 15) {
                for (int lon = -180; lon < 180; lon += 30) {
                    const GeoCoord g(lon + 0.5, lat + 0.25);
                    const WorldPoint w = embed(s, g);
                    samples.push_back({{"geo", to_json(g)}, {"world", Json::array({w.x, w.y, w.z})}});
                }
            }
            Json entry = to_json(s);
            entry["samples"] = std::move(samples);
            scenes.push_back(std::move(entry));
        }
    }
    return Json{{"tolerance_m", 1e-6}, {"scenes", std::move(scenes)}};
}

}  // namespace terralens
