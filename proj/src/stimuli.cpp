#include "terralens/stimuli.hpp"

#include <algorithm>
#include <string>

namespace terralens {

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N>& values, const char* what) {
    for (E v : values) {
        if (to_string(v) == s) return v;
    }
    throw InvalidArgument(std::string("unknown ") + what + ": " + std::string(s));
}

using Gaps = std::array<double, kPolygonVertices>;

// Uniform over {g : g_i >= 30, sum g = 360}; identical in law to drawing a
// flat Dirichlet over 360 degrees and rejecting until every gap is >= 30.
Gaps draw_gaps(Rng& rng) {
    Gaps e{};
    double sum = 0.0;
    for (double& x : e) {
        x = -std::log1p(-rng.uniform());
        sum += x;
    }
    const double slack = 360.0 - kPolygonVertices * kPolygonMinGap;
    for (double& x : e) x = kPolygonMinGap + slack * x / sum;
    return e;
}

Gaps blend(const Gaps& from, const Gaps& to, double s) {
    Gaps out{};
    for (int i = 0; i < kPolygonVertices; ++i) out[i] = (1.0 - s) * from[i] + s * to[i];
    return out;
}

// Smallest-area configuration reachable from `g`: all gaps at the minimum
// except the one that is currently largest.
Gaps min_area_vertex(const Gaps& g) {
    Gaps out{};
    out.fill(kPolygonMinGap);
    const auto it = std::max_element(g.begin(), g.end());
    out[static_cast<std::size_t>(it - g.begin())] = 360.0 - (kPolygonVertices - 1) * kPolygonMinGap;
    return out;
}

double gaps_area(const GeoCoord& centre, double start, const Gaps& g) {
    return polygon_area(polygon_from_gaps(centre, start, g));
}

// Finds s in [0,1] with area(blend(from, to, s)) == target, given that target
// lies between the two endpoint areas.
Gaps solve_gaps(const GeoCoord& centre, double start, const Gaps& from, const Gaps& to, double target) {
    double lo = 0.0, hi = 1.0;
    double f_lo = gaps_area(centre, start, from) - target;
    Gaps best = from;
    double best_err = std::abs(f_lo);
    for (int it = 0; it < 200 && best_err > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const Gaps g = blend(from, to, mid);
        const double f = gaps_area(centre, start, g) - target;
        if (std::abs(f) < best_err) {
            best_err = std::abs(f);
            best = g;
        }
        if ((f < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
    }
    return best;
}

}  // namespace

std::string_view to_string(Difficulty d) {
    switch (d) {
        case Difficulty::Easy: return "easy";
        case Difficulty::SmallVariation: return "small-variation";
        case Difficulty::FarDistance: return "far-distance";
    }
    return "unknown";
}

std::string_view to_string(DirectionCondition c) {
    return c == DirectionCondition::Close ? "close" : "far";
}

std::string_view to_string(TaskFamily f) {
    switch (f) {
        case TaskFamily::Distance: return "distance";
        case TaskFamily::Area: return "area";
        case TaskFamily::Direction: return "direction";
    }
    return "unknown";
}

std::string_view to_string(DirectionTruth t) { return t == DirectionTruth::Hit ? "hit" : "miss"; }

Difficulty difficulty_from_string(std::string_view s) {
    return parse_enum(s, std::array{Difficulty::Easy, Difficulty::SmallVariation, Difficulty::FarDistance},
                      "difficulty");
}

DirectionCondition direction_condition_from_string(std::string_view s) {
    return parse_enum(s, std::array{DirectionCondition::Close, DirectionCondition::Far}, "direction condition");
}

TaskFamily task_family_from_string(std::string_view s) {
    return parse_enum(s, std::array{TaskFamily::Distance, TaskFamily::Area, TaskFamily::Direction},
                      "task family");
}

double distance_cv(Difficulty d) { return d == Difficulty::SmallVariation ? 0.05 : 0.10; }
double area_cv(Difficulty d) { return d == Difficulty::SmallVariation ? 0.075 : 0.10; }
double separation(Difficulty d) { return d == Difficulty::FarDistance ? kFarSeparation : kCloseSeparation; }
double separation(DirectionCondition c) { return c == DirectionCondition::Far ? kFarSeparation : kCloseSeparation; }

double cv_of_pair(double a, double b) { return std::abs(a - b) / (a + b); }

TaskFamily family_of(const Task& t) {
    return static_cast<TaskFamily>(t.index());
}

std::vector<GeoCoord> polygon_from_gaps(const GeoCoord& centre, double start_azimuth, const Gaps& gaps,
                                        double radius) {
    std::vector<GeoCoord> verts;
    verts.reserve(kPolygonVertices);
    double az = start_azimuth;
    for (int i = 0; i < kPolygonVertices; ++i) {
        verts.push_back(destination(centre, az, radius));
        // Decreasing azimuth is counter-clockwise seen from outside.
        az -= gaps[i];
    }
    return verts;
}

DistanceTask gen_distance_task(Difficulty difficulty, Rng& rng) {
    const double c = distance_cv(difficulty);
    const double sep = separation(difficulty);
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        const double d1 = rng.uniform(kPairDistanceMin, kPairDistanceMax);
        const double d2 = d1 * (1.0 - c) / (1.0 + c);
        if (d2 < kPairDistanceMin || d2 > kPairDistanceMax) continue;

        const bool first_longer = rng.coin();
        const GeoCoord m1 = uniform_sphere_sample(rng);
        const GeoCoord m2 = destination(m1, rng.uniform(0.0, 360.0), sep);
        auto make_pair = [&](const GeoCoord& m, double d) {
            const double theta = rng.uniform(0.0, 360.0);
            return std::array<GeoCoord, 2>{destination(m, theta, 0.5 * d), destination(m, theta + 180.0, 0.5 * d)};
        };
        DistanceTask t;
        t.pair_ab = make_pair(m1, first_longer ? d1 : d2);
        t.pair_xy = make_pair(m2, first_longer ? d2 : d1);
        t.difficulty = difficulty;
        t.truth = first_longer ? 0 : 1;
        t.cv = c;
        t.midpoint_separation = sep;
        return t;
    }
    throw GenerationExhausted("gen_distance_task: rejection limit reached");
}

AreaTask gen_area_task(Difficulty difficulty, Rng& rng, const SurfaceClassifier& is_land) {
    const double c = area_cv(difficulty);
    const double ratio = (1.0 - c) / (1.0 + c);
    const double sep = separation(difficulty);
    Gaps regular{};
    regular.fill(360.0 / kPolygonVertices);

    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        const GeoCoord ca = uniform_sphere_sample(rng);
        const GeoCoord cb = destination(ca, rng.uniform(0.0, 360.0), sep);
        const double start_a = rng.uniform(0.0, 360.0);
        const double start_b = rng.uniform(0.0, 360.0);
        const Gaps gaps_a = draw_gaps(rng);
        const Gaps gaps_b0 = draw_gaps(rng);
        const bool b_larger = rng.coin();

        const double area_a = gaps_area(ca, start_a, gaps_a);
        const double area_b0 = gaps_area(cb, start_b, gaps_b0);
        const double area_max = gaps_area(cb, start_b, regular);
        const Gaps min_b = min_area_vertex(gaps_b0);
        const double area_min = gaps_area(cb, start_b, min_b);

        // B's gaps are moved toward the regular octagon (to grow) or toward
        // the thinnest admissible shape (to shrink) until the CV is exact.
        std::optional<Gaps> gaps_b;
        for (bool larger : {b_larger, !b_larger}) {
            const double target = larger ? area_a / ratio : area_a * ratio;
            if (target >= area_b0 && target <= area_max) {
                gaps_b = solve_gaps(cb, start_b, gaps_b0, regular, target);
            } else if (target <= area_b0 && target >= area_min) {
                gaps_b = solve_gaps(cb, start_b, gaps_b0, min_b, target);
            }
            if (gaps_b) break;
        }
        if (!gaps_b) continue;

        std::vector<GeoCoord> va = polygon_from_gaps(ca, start_a, gaps_a);
        std::vector<GeoCoord> vb = polygon_from_gaps(cb, start_b, *gaps_b);
        if (is_land) {
            const bool land = is_land(va.front());
            const auto same = [&](const GeoCoord& g) { return is_land(g) == land; };
            if (!std::all_of(va.begin(), va.end(), same) || !std::all_of(vb.begin(), vb.end(), same)) continue;
        }
        SphericalPolygon pa(std::move(va));
        SphericalPolygon pb(std::move(vb));
        const int truth = polygon_area(pb) > polygon_area(pa) ? 1 : 0;
        return AreaTask{{std::move(pa), std::move(pb)}, {ca, cb}, difficulty, truth, c, sep};
    }
    throw GenerationExhausted("gen_area_task: rejection limit reached");
}

DirectionTask gen_direction_task(DirectionCondition condition, DirectionTruth truth, Rng& rng,
                                 const DirectionOptions& options) {
    DirectionTask t;
    t.condition = condition;
    t.separation = separation(condition);
    t.truth = truth;
    t.arrow_length = options.arrow_length;
    t.arrow_start = uniform_sphere_sample(rng);
    t.arrow_bearing = rng.uniform(0.0, 360.0);
    const GeoCoord on_path = destination(t.arrow_start, t.arrow_bearing, t.separation);
    if (truth == DirectionTruth::Hit) {
        t.target = on_path;
        t.miss_offset = 0.0;
        return t;
    }
    // Step off the path along the great circle perpendicular to it, which
    // keeps the cross-track distance equal to the step length.
    const double travel = initial_bearing(on_path, t.arrow_start) + 180.0;
    const double side = rng.coin() ? 1.0 : -1.0;
    t.target = destination(on_path, travel - 90.0 * side, options.miss_offset);
    t.miss_offset = side * options.miss_offset;
    return t;
}

int oracle_answer(const DistanceTask& t) {
    const double ab = great_circle_distance(t.pair_ab[0], t.pair_ab[1]);
    const double xy = great_circle_distance(t.pair_xy[0], t.pair_xy[1]);
    return ab > xy ? 0 : 1;
}

int oracle_answer(const AreaTask& t) {
    return polygon_area(t.polygons[0]) > polygon_area(t.polygons[1]) ? 0 : 1;
}

DirectionTruth oracle_answer(const DirectionTask& t) {
    const double xt = cross_track_distance(t.arrow_start, t.arrow_bearing, t.target);
    return std::abs(xt) < 1e-6 ? DirectionTruth::Hit : DirectionTruth::Miss;
}

double accuracy_score(long correct, long total) {
    if (total <= 0) throw EmptySample("accuracy_score: no responses");
    if (correct < 0 || correct > total) throw InvalidArgument("accuracy_score: correct count out of range");
    return (static_cast<double>(correct) / static_cast<double>(total) - 0.5) / 0.5;
}

int latin_square_entry(int participant_index, int position) {
    // Williams design: each condition appears once per position and follows
    // every other condition exactly once.
    static constexpr int kSquare[4][4] = {{0, 1, 3, 2}, {1, 2, 0, 3}, {2, 3, 1, 0}, {3, 0, 2, 1}};
    if (participant_index < 0) throw InvalidArgument("participant index must be non-negative");
    if (position < 0 || position > 3) throw InvalidArgument("position must be in [0, 3]");
    return kSquare[participant_index % 4][position];
}

std::size_t Session::stimulus_count() const {
    std::size_t n = 0;
    for (const SessionBlock& b : blocks) n += b.stimuli.size();
    return n;
}

Session build_session(int participant_index, std::uint64_t seed) {
    if (participant_index < 0) throw InvalidArgument("participant index must be non-negative");
    Session s;
    s.participant_index = participant_index;
    s.seed = seed;
    for (int pos = 0; pos < 4; ++pos) {
        s.visualisation_order[pos] = kAllSceneKinds[latin_square_entry(participant_index, pos)];
    }

    Rng order_rng = Rng::for_stream(seed, 0x5E55'0000ULL + static_cast<std::uint64_t>(participant_index));
    const std::uint64_t participant_seed = order_rng.next_u64();
    int index = 0;

    for (TaskFamily family : {TaskFamily::Distance, TaskFamily::Area, TaskFamily::Direction}) {
        for (SceneKind vis : s.visualisation_order) {
            SessionBlock block{vis, family, {}};

            // Condition list for the cell, then shuffled (Fisher-Yates).
            std::vector<int> conditions;
            if (family == TaskFamily::Direction) {
                conditions = {0, 0, 0, 0, 0, 0, 1, 1, 1};
            } else {
                conditions = {0, 0, 0, 1, 1, 1, 2, 2, 2};
            }
            for (std::size_t i = conditions.size() - 1; i > 0; --i) {
                std::swap(conditions[i], conditions[order_rng.below(i + 1)]);
            }

            for (int cond : conditions) {
                Stimulus st;
                st.index = index;
                st.visualisation = vis;
                st.family = family;
                st.stream = static_cast<std::uint64_t>(index);
                Rng rng = Rng::for_stream(participant_seed, st.stream);
                switch (family) {
                    case TaskFamily::Distance: {
                        const auto d = static_cast<Difficulty>(cond);
                        st.condition = to_string(d);
                        st.task = gen_distance_task(d, rng);
                        break;
                    }
                    case TaskFamily::Area: {
                        const auto d = static_cast<Difficulty>(cond);
                        st.condition = to_string(d);
                        st.task = gen_area_task(d, rng);
                        break;
                    }
                    case TaskFamily::Direction: {
                        const auto c = static_cast<DirectionCondition>(cond);
                        st.condition = to_string(c);
                        const DirectionTruth truth = rng.coin() ? DirectionTruth::Hit : DirectionTruth::Miss;
                        st.task = gen_direction_task(c, truth, rng);
                        break;
                    }
                }
                block.stimuli.push_back(std::move(st));
                ++index;
            }
            s.blocks.push_back(std::move(block));
        }
    }
    return s;
}

}  // namespace terralens
