#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "terralens/analytics.hpp"
#include "terralens/projection.hpp"
#include "terralens/scene.hpp"
#include "terralens/stimuli.hpp"

namespace terralens {

using Json = nlohmann::ordered_json;

// ---- GeoJSON -----------------------------------------------------------------

/// Geometry read from a GeoJSON document. Polygon rings become closed paths
/// (outer ring and holes alike; renderers fill with the even-odd rule), line
/// strings become open paths.
struct Coastlines {
    std::vector<GeoPath> paths;
};

/// Accepts FeatureCollection, Feature, GeometryCollection and bare Polygon,
/// MultiPolygon, LineString, MultiLineString geometries. Throws ParseError on
/// malformed input.
Coastlines parse_geojson(const std::string& text);
Coastlines read_geojson(const std::filesystem::path& file);

/// Land/sea lookup over closed coastline rings, by even-odd ray casting in
/// the lon/lat plane (the topology GeoJSON rings are drawn in).
class LandMask {
public:
    explicit LandMask(const Coastlines& coast);
    bool contains(const GeoCoord& g) const;
    SurfaceClassifier classifier() const;

private:
    std::vector<std::vector<GeoCoord>> rings_;
};

// ---- CSV ---------------------------------------------------------------------

/// Header: participant,visualisation,task,difficulty,stimulus_id,chosen,correct,response_time
std::vector<ResponseRecord> parse_responses_csv(std::istream& in);
std::vector<ResponseRecord> read_responses_csv(const std::filesystem::path& file);

/// Header: t,head_x,head_y,head_z,head_qw,head_qx,head_qy,head_qz,
///         ctrl_x,ctrl_y,ctrl_z,ctrl_qw,ctrl_qx,ctrl_qy,ctrl_qz
std::vector<PoseSample> parse_pose_log_csv(std::istream& in);
std::vector<PoseSample> read_pose_log_csv(const std::filesystem::path& file);

/// Log file name for one response: p<participant>_<stimulus_id>.csv
std::string pose_log_name(int participant, const std::string& stimulus_id);

// ---- JSON --------------------------------------------------------------------

Json to_json(const GeoCoord& g);
Json to_json(const SphericalRotation& r);
Json to_json(const SceneParams& p);
Json to_json(const SceneEmbedding& s);
SceneEmbedding scene_from_json(const Json& j);

/// Stimulus record: {family, difficulty, payload, truth, seed, stream, cv, separation}.
Json task_to_json(const Task& task, std::uint64_t seed, std::uint64_t stream);
Json to_json(const Session& s);

/// Geo -> world reference samples for every scene kind, for cross-language
/// conformance checks.
Json golden_vectors(const std::vector<SphericalRotation>& rotations, const SceneParams& params = {});

}  // namespace terralens
