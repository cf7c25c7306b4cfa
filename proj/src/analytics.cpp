#include "terralens/analytics.hpp"

#include <algorithm>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "terralens/stimuli.hpp"

namespace terralens {

Quaternion Quaternion::from_axis_angle(Vec3 axis, double angle_deg) {
    const Vec3 a = normalized(axis);
    const double h = 0.5 * radians(angle_deg);
    const double s = std::sin(h);
    return {std::cos(h), a.x * s, a.y * s, a.z * s};
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

double rotation_angle_deg(const Quaternion& a, const Quaternion& b) {
    // 2*acos(|a.b|), evaluated through the relative rotation for accuracy at
    // small angles.
    const Quaternion d = a.conjugate() * b;
    const double v = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
    return degrees(2.0 * std::atan2(v, std::abs(d.w)));
}

AggregateInteraction aggregate(std::span<const PoseSample> log) {
    if (log.empty()) throw EmptyLog("aggregate: empty log");
    for (const PoseSample& s : log) {
        if (std::abs(s.head_rot.norm() - 1.0) > 1e-6 || std::abs(s.controller_rot.norm() - 1.0) > 1e-6) {
            throw InvalidArgument("aggregate: orientation is not a unit quaternion");
        }
    }
    AggregateInteraction out;
    for (std::size_t i = 1; i < log.size(); ++i) {
        const PoseSample& a = log[i - 1];
        const PoseSample& b = log[i];
        if (b.t < a.t) throw InvalidArgument("aggregate: time stamps decrease");
        if (b.t - a.t > kLogGapWarning) ++out.gap_warnings;
        out.head_move_m += distance(a.head_pos, b.head_pos);
        out.controller_move_m += distance(a.controller_pos, b.controller_pos);
        out.head_rot_deg += rotation_angle_deg(a.head_rot, b.head_rot);
        out.controller_rot_deg += rotation_angle_deg(a.controller_rot, b.controller_rot);
    }
    return out;
}

MeanCI mean_ci(std::span<const double> values) {
    if (values.empty()) throw EmptySample("mean_ci: no values");
    MeanCI out;
    out.n = static_cast<int>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / out.n;
    if (out.n < 2) return out;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    const double se = std::sqrt(ss / (out.n - 1)) / std::sqrt(static_cast<double>(out.n));
    const boost::math::students_t dist(out.n - 1);
    const double q = boost::math::quantile(dist, 0.975);
    out.lo = out.mean - q * se;
    out.hi = out.mean + q * se;
    return out;
}

std::map<ConditionKey, ConditionSummary> summarize(std::span<const ResponseRecord> records) {
    if (records.empty()) throw EmptySample("summarize: no records");

    struct Tally {
        int responses = 0;
        int correct = 0;
        double correct_time = 0.0;
    };
    // Per condition, per participant (ordered by participant id).
    std::map<ConditionKey, std::map<int, Tally>> cells;
    for (const ResponseRecord& r : records) {
        if (!(r.response_time > 0.0)) throw InvalidArgument("summarize: response time must be positive");
        Tally& t = cells[{r.visualisation, r.task, r.difficulty}][r.participant];
        ++t.responses;
        if (r.correct) {
            ++t.correct;
            t.correct_time += r.response_time;
        }
    }

    std::map<ConditionKey, ConditionSummary> out;
    for (const auto& [key, by_participant] : cells) {
        ConditionSummary s;
        std::vector<double> scores;
        std::vector<double> times;
        for (const auto& [participant, t] : by_participant) {
            s.responses += t.responses;
            s.correct += t.correct;
            scores.push_back(accuracy_score(t.correct, t.responses));
            if (t.correct > 0) times.push_back(t.correct_time / t.correct);
        }
        s.accuracy = mean_ci(scores);
        if (!times.empty()) s.correct_time = mean_ci(times);
        out.emplace(key, std::move(s));
    }
    return out;
}

double chi2_survival(double x, int dof) {
    if (dof < 1) throw InvalidArgument("chi2_survival: dof must be positive");
    if (!(x > 0.0)) return 1.0;
    const boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, x));
}

FriedmanResult friedman(const std::vector<std::vector<double>>& matrix) {
    const std::size_t n = matrix.size();
    if (n < 2) throw DegenerateInput("friedman: need at least two subjects");
    const std::size_t k = matrix.front().size();
    if (k < 2) throw DegenerateInput("friedman: need at least two conditions");

    std::vector<double> rank_sums(k, 0.0);
    double tie_term = 0.0;
    std::vector<std::size_t> order(k);
    for (const auto& row : matrix) {
        if (row.size() != k) throw InvalidArgument("friedman: ragged matrix");
        for (double v : row) {
            if (!std::isfinite(v)) throw InvalidArgument("friedman: non-finite value");
        }
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
        for (std::size_t i = 0; i < k;) {
            std::size_t j = i;
            while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
            // Positions i..j (0-based) share the mid-rank.
            const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t m = i; m <= j; ++m) rank_sums[order[m]] += mid;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }

    const double dn = static_cast<double>(n);
    const double dk = static_cast<double>(k);
    double sum_sq = 0.0;
    for (double r : rank_sums) sum_sq += r * r;
    const double uncorrected = 12.0 / (dn * dk * (dk + 1.0)) * sum_sq - 3.0 * dn * (dk + 1.0);
    const double correction = 1.0 - tie_term / (dn * (dk * dk * dk - dk));

    FriedmanResult out;
    out.dof = static_cast<int>(k) - 1;
    if (correction <= 0.0) {
        out.chi2 = 0.0;
        out.p = 1.0;
        return out;
    }
    out.chi2 = std::max(0.0, uncorrected / correction);
    out.p = chi2_survival(out.chi2, out.dof);
    return out;
}

}  // namespace terralens
