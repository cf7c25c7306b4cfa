#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "terralens/scene.hpp"

namespace terralens {

struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Quaternion from_axis_angle(Vec3 axis, double angle_deg);
    friend Quaternion operator*(const Quaternion& a, const Quaternion& b);
    Quaternion conjugate() const { return {w, -x, -y, -z}; }
    double norm() const;
};

/// Rotation angle (degrees) between two orientations, double-cover safe.
double rotation_angle_deg(const Quaternion& a, const Quaternion& b);

struct PoseSample {
    double t = 0.0;
    WorldPoint head_pos;
    Quaternion head_rot;
    WorldPoint controller_pos;
    Quaternion controller_rot;
};

struct AggregateInteraction {
    double head_move_m = 0.0;
    double controller_move_m = 0.0;
    double head_rot_deg = 0.0;
    double controller_rot_deg = 0.0;
    /// Consecutive samples further apart than kLogGapWarning seconds.
    int gap_warnings = 0;
};

inline constexpr double kLogGapWarning = 0.5;

/// Sums of consecutive head/controller displacements and rotation angles.
/// Throws EmptyLog for an empty log, InvalidArgument for decreasing time
/// stamps or non-unit quaternions.
AggregateInteraction aggregate(std::span<const PoseSample> log);

struct ResponseRecord {
    int participant = 0;
    std::string visualisation;
    std::string task;
    std::string difficulty;
    std::string stimulus_id;
    std::string chosen;
    bool correct = false;
    double response_time = 0.0;
};

struct MeanCI {
    double mean = 0.0;
    std::optional<double> lo;  // absent with fewer than two participants
    std::optional<double> hi;
    int n = 0;
};

/// Mean over per-participant values with a two-sided 95% Student-t interval.
MeanCI mean_ci(std::span<const double> values);

struct ConditionSummary {
    int responses = 0;
    int correct = 0;
    MeanCI accuracy;
    /// Over correct responses only; absent when nobody answered correctly.
    std::optional<MeanCI> correct_time;
};

using ConditionKey = std::tuple<std::string, std::string, std::string>;  // visualisation, task, difficulty

std::map<ConditionKey, ConditionSummary> summarize(std::span<const ResponseRecord> records);

struct FriedmanResult {
    double chi2 = 0.0;
    int dof = 0;
    double p = 1.0;
};

/// Friedman rank test over n subjects (rows) x k conditions (columns). Ties
/// are mid-ranked and the statistic is tie-corrected; p is the upper tail of
/// chi-square with k-1 degrees of freedom. A matrix whose rows are all
/// constant carries no rank information and yields chi2 = 0, p = 1.
FriedmanResult friedman(const std::vector<std::vector<double>>& matrix);

/// Upper tail of the chi-square distribution.
double chi2_survival(double x, int dof);

}  // namespace terralens
