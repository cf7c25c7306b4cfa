#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "terralens/rng.hpp"
#include "terralens/scene.hpp"
#include "terralens/sphere.hpp"

namespace terralens {

/// Difficulty groups of the two comparison tasks.
enum class Difficulty { Easy, SmallVariation, FarDistance };

/// Direction-task groups, by distance between arrow and target.
enum class DirectionCondition { Close, Far };

enum class TaskFamily { Distance, Area, Direction };

enum class DirectionTruth { Hit, Miss };

std::string_view to_string(Difficulty d);
std::string_view to_string(DirectionCondition c);
std::string_view to_string(TaskFamily f);
std::string_view to_string(DirectionTruth t);
Difficulty difficulty_from_string(std::string_view s);
DirectionCondition direction_condition_from_string(std::string_view s);
TaskFamily task_family_from_string(std::string_view s);

inline constexpr double kPairDistanceMin = 40.0;
inline constexpr double kPairDistanceMax = 60.0;
inline constexpr double kCloseSeparation = 60.0;
inline constexpr double kFarSeparation = 120.0;
inline constexpr double kPolygonRadius = 8.0;
inline constexpr double kPolygonMinGap = 30.0;
inline constexpr int kPolygonVertices = 8;
inline constexpr int kMaxRejections = 10000;

/// Target coefficient of variation and centre separation per condition.
double distance_cv(Difficulty d);
double area_cv(Difficulty d);
double separation(Difficulty d);
double separation(DirectionCondition c);

/// Coefficient of variation of two positive values with the population
/// (n) divisor: |a - b| / (a + b).
double cv_of_pair(double a, double b);

struct DistanceTask {
    std::array<GeoCoord, 2> pair_ab;
    std::array<GeoCoord, 2> pair_xy;
    Difficulty difficulty = Difficulty::Easy;
    int truth = 0;  // 0: A-B is longer, 1: X-Y is longer
    double cv = 0.0;
    double midpoint_separation = 0.0;
};

struct AreaTask {
    std::array<SphericalPolygon, 2> polygons;
    /// Generation centres; every vertex lies kPolygonRadius from its centre.
    std::array<GeoCoord, 2> centroids;
    Difficulty difficulty = Difficulty::Easy;
    int truth = 0;  // index of the larger polygon
    double cv = 0.0;
    double centroid_separation = 0.0;
};

struct DirectionTask {
    GeoCoord arrow_start;
    double arrow_bearing = 0.0;
    double arrow_length = 10.0;
    GeoCoord target;
    double separation = 0.0;
    DirectionCondition condition = DirectionCondition::Close;
    DirectionTruth truth = DirectionTruth::Hit;
    double miss_offset = 0.0;  // signed cross-track distance of a Miss target, 0 for Hit
};

using Task = std::variant<DistanceTask, AreaTask, DirectionTask>;

TaskFamily family_of(const Task& t);

/// Land/sea classifier; when supplied, both area polygons must lie entirely
/// on the same class.
using SurfaceClassifier = std::function<bool(const GeoCoord&)>;

struct DirectionOptions {
    double miss_offset = 15.0;
    double arrow_length = 10.0;
};

DistanceTask gen_distance_task(Difficulty difficulty, Rng& rng);
AreaTask gen_area_task(Difficulty difficulty, Rng& rng, const SurfaceClassifier& is_land = {});
DirectionTask gen_direction_task(DirectionCondition condition, DirectionTruth truth, Rng& rng,
                                 const DirectionOptions& options = {});

/// Vertices of a polygon with the given azimuth gaps (degrees, summing to
/// 360) at `radius` degrees from `centre`, listed counter-clockwise as seen
/// from outside the sphere, starting at azimuth `start_azimuth`.
std::vector<GeoCoord> polygon_from_gaps(const GeoCoord& centre, double start_azimuth,
                                        const std::array<double, kPolygonVertices>& gaps,
                                        double radius = kPolygonRadius);

/// Answer derived from the task geometry alone: pair or polygon index for
/// the comparison tasks, Hit/Miss for direction.
int oracle_answer(const DistanceTask& t);
int oracle_answer(const AreaTask& t);
DirectionTruth oracle_answer(const DirectionTask& t);

/// Maps the fraction correct onto [-1, 1] with chance at 0.
double accuracy_score(long correct, long total);

/// Index into kAllSceneKinds of the visualisation shown at `position` for a
/// participant (balanced 4x4 Latin square, row = participant mod 4).
int latin_square_entry(int participant_index, int position);

struct Stimulus {
    int index = 0;  // position within the session
    SceneKind visualisation = SceneKind::Exocentric;
    TaskFamily family = TaskFamily::Distance;
    std::string_view condition;
    std::uint64_t stream = 0;
    Task task;
};

struct SessionBlock {
    SceneKind visualisation = SceneKind::Exocentric;
    TaskFamily family = TaskFamily::Distance;
    std::vector<Stimulus> stimuli;
};

struct Session {
    int participant_index = 0;
    std::uint64_t seed = 0;
    std::array<SceneKind, 4> visualisation_order{};
    std::vector<SessionBlock> blocks;

    std::size_t stimulus_count() const;
};

inline constexpr int kRepetitionsPerCell = 9;
inline constexpr int kStimuliPerParticipant = 4 * 3 * kRepetitionsPerCell;

/// Full question list of one participant: tasks in the fixed order distance,
/// area, direction; within each task the visualisations follow the Latin
/// square row; 3/3/3 repetitions per difficulty for the comparison tasks and
/// 6 close + 3 far for direction (Hit/Miss drawn at random).
Session build_session(int participant_index, std::uint64_t seed);

}  // namespace terralens
