#include "terralens/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"

namespace terralens {

SphericalRotation parse_rotation(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidArgument("rotation: not a number: '" + item + "'");
        }
    }
    if (v.size() < 2 || v.size() > 3) throw InvalidArgument("rotation: expected lambda,phi[,gamma]");
    for (double x : v) {
        if (!std::isfinite(x)) throw InvalidArgument("rotation: angles must be finite");
    }
    return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

void check_spacing(double spacing, const char* what, bool allow_zero) {
    if (allow_zero && spacing == 0.0) return;
    const double n = 360.0 / spacing;
    if (!(spacing > 0.0) || std::abs(n - std::round(n)) > 1e-9) {
        throw InvalidArgument(std::string(what) + " spacing must be positive and divide 360");
    }
}

Json generate_tasks(TaskFamily family, const std::string& difficulty, int count, std::uint64_t seed,
                    const Coastlines* land) {
    if (count < 1) throw InvalidArgument("generate: count must be at least 1");
    std::optional<LandMask> mask;
    if (land) mask.emplace(*land);
    Json out = Json::array();
    for (int i = 0; i < count; ++i) {
        const auto stream = static_cast<std::uint64_t>(i);
        Rng rng = Rng::for_stream(seed, stream);
        Task task;
        switch (family) {
            case TaskFamily::Distance:
                task = gen_distance_task(difficulty_from_string(difficulty), rng);
                break;
            case TaskFamily::Area:
                task = gen_area_task(difficulty_from_string(difficulty), rng,
                                     mask ? mask->classifier() : SurfaceClassifier{});
                break;
            case TaskFamily::Direction: {
                const DirectionCondition c = direction_condition_from_string(difficulty);
                const DirectionTruth truth = rng.coin() ? DirectionTruth::Hit : DirectionTruth::Miss;
                task = gen_direction_task(c, truth, rng);
                break;
            }
        }
        out.push_back(task_to_json(task, seed, stream));
    }
    return out;
}

namespace {

Json mean_ci_json(const MeanCI& m) {
    return Json{{"mean", m.mean},
                {"lo", m.lo ? Json(*m.lo) : Json(nullptr)},
                {"hi", m.hi ? Json(*m.hi) : Json(nullptr)},
                {"n", m.n}};
}

std::string fmt3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string fmt_ci(const MeanCI& m) {
    std::string s = fmt3(m.mean);
    if (m.lo && m.hi) s += " [" + fmt3(*m.lo) + ", " + fmt3(*m.hi) + "]";
    return s;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string format_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& r : rows) {
        widths.resize(std::max(widths.size(), r.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
    }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) line += (i ? "  " : "") + pad(r[i], widths[i]);
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

struct InteractionSums {
    double head_move = 0.0;
    double ctrl_move = 0.0;
    double head_rot = 0.0;
    double ctrl_rot = 0.0;
    int logs = 0;
};

// Visualisations in canonical order, restricted to the ones present.
std::vector<std::string> ordered_visualisations(const std::set<std::string>& present) {
    std::vector<std::string> out;
    for (SceneKind k : kAllSceneKinds) {
        if (present.contains(std::string(to_string(k)))) out.emplace_back(to_string(k));
    }
    for (const std::string& v : present) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return out;
}

}  // namespace

AnalysisReport analyze(const std::vector<ResponseRecord>& records,
                       const std::optional<std::filesystem::path>& logs_dir) {
    const auto summaries = summarize(records);

    // Pose logs, averaged per participant within a condition.
    std::map<ConditionKey, std::map<int, InteractionSums>> interaction;
    int gap_warnings = 0;
    int missing_logs = 0;
    if (logs_dir) {
        if (!std::filesystem::is_directory(*logs_dir)) {
            throw InvalidArgument("analyze: not a directory: " + logs_dir->string());
        }
        for (const ResponseRecord& r : records) {
            const auto file = *logs_dir / pose_log_name(r.participant, r.stimulus_id);
            if (!std::filesystem::exists(file)) {
                ++missing_logs;
                continue;
            }
            const std::vector<PoseSample> log = read_pose_log_csv(file);
            if (log.empty()) {
                ++missing_logs;
                continue;
            }
            const AggregateInteraction a = aggregate(log);
            gap_warnings += a.gap_warnings;
            InteractionSums& s = interaction[{r.visualisation, r.task, r.difficulty}][r.participant];
            s.head_move += a.head_move_m;
            s.ctrl_move += a.controller_move_m;
            s.head_rot += a.head_rot_deg;
            s.ctrl_rot += a.controller_rot_deg;
            ++s.logs;
        }
    }

    std::set<int> participants;
    for (const ResponseRecord& r : records) participants.insert(r.participant);

    Json conditions = Json::array();
    std::vector<std::vector<std::string>> rows{
        {"visualisation", "task", "difficulty", "n", "accuracy [95% CI]", "time s [95% CI]", "head m", "ctrl m",
         "head deg", "ctrl deg"}};
    for (const auto& [key, s] : summaries) {
        const auto& [vis, task, diff] = key;
        Json c{{"visualisation", vis},
               {"task", task},
               {"difficulty", diff},
               {"responses", s.responses},
               {"correct", s.correct},
               {"accuracy", mean_ci_json(s.accuracy)},
               {"correct_time", s.correct_time ? mean_ci_json(*s.correct_time) : Json(nullptr)}};
        std::vector<std::string> row{vis, task, diff, std::to_string(s.responses), fmt_ci(s.accuracy),
                                     s.correct_time ? fmt_ci(*s.correct_time) : "-"};
        const auto it = interaction.find(key);
        if (it == interaction.end()) {
            c["interaction"] = nullptr;
            row.insert(row.end(), {"-", "-", "-", "-"});
        } else {
            std::vector<double> hm, cm, hr, cr;
            int logs = 0;
            for (const auto& [p, sums] : it->second) {
                hm.push_back(sums.head_move / sums.logs);
                cm.push_back(sums.ctrl_move / sums.logs);
                hr.push_back(sums.head_rot / sums.logs);
                cr.push_back(sums.ctrl_rot / sums.logs);
                logs += sums.logs;
            }
            const MeanCI mhm = mean_ci(hm), mcm = mean_ci(cm), mhr = mean_ci(hr), mcr = mean_ci(cr);
            c["interaction"] = {{"logs", logs},
                                {"head_move_m", mean_ci_json(mhm)},
                                {"controller_move_m", mean_ci_json(mcm)},
                                {"head_rot_deg", mean_ci_json(mhr)},
                                {"controller_rot_deg", mean_ci_json(mcr)}};
            row.insert(row.end(), {fmt3(mhm.mean), fmt3(mcm.mean), fmt3(mhr.mean), fmt3(mcr.mean)});
        }
        conditions.push_back(std::move(c));
        rows.push_back(std::move(row));
    }

    // Friedman per task: subjects are participants, conditions visualisations.
    std::map<std::string, std::set<std::string>> vis_by_task;
    struct Cell {
        int responses = 0;
        int correct = 0;
        double correct_time = 0.0;
    };
    std::map<std::string, std::map<int, std::map<std::string, Cell>>> cells;
    for (const ResponseRecord& r : records) {
        vis_by_task[r.task].insert(r.visualisation);
        Cell& cell = cells[r.task][r.participant][r.visualisation];
        ++cell.responses;
        if (r.correct) {
            ++cell.correct;
            cell.correct_time += r.response_time;
        }
    }
    Json tests = Json::array();
    std::vector<std::vector<std::string>> ftable{{"task", "measure", "n", "k", "chi2", "p"}};
    for (const auto& [task, present] : vis_by_task) {
        const std::vector<std::string> vis = ordered_visualisations(present);
        for (const std::string measure : {"accuracy", "correct_time"}) {
            std::vector<std::vector<double>> matrix;
            for (const auto& [p, by_vis] : cells[task]) {
                std::vector<double> row;
                for (const std::string& v : vis) {
                    const auto it = by_vis.find(v);
                    if (it == by_vis.end()) break;
                    if (measure == std::string("accuracy")) {
                        row.push_back(accuracy_score(it->second.correct, it->second.responses));
                    } else if (it->second.correct > 0) {
                        row.push_back(it->second.correct_time / it->second.correct);
                    } else {
                        break;
                    }
                }
                if (row.size() == vis.size()) matrix.push_back(std::move(row));
            }
            Json t{{"task", task}, {"measure", measure}, {"visualisations", vis},
                   {"n", static_cast<int>(matrix.size())}};
            if (matrix.size() >= 2 && vis.size() >= 2) {
                const FriedmanResult f = friedman(matrix);
                t["chi2"] = f.chi2;
                t["dof"] = f.dof;
                t["p"] = f.p;
                ftable.push_back({task, measure, std::to_string(matrix.size()), std::to_string(vis.size()),
                                  fmt3(f.chi2), fmt3(f.p)});
            } else {
                t["chi2"] = nullptr;
                t["dof"] = nullptr;
                t["p"] = nullptr;
                ftable.push_back({task, measure, std::to_string(matrix.size()), std::to_string(vis.size()), "-", "-"});
            }
            tests.push_back(std::move(t));
        }
    }

    AnalysisReport report;
    report.summary = Json{{"participants", static_cast<int>(participants.size())},
                          {"responses", static_cast<int>(records.size())},
                          {"logs", logs_dir ? Json(logs_dir->generic_string()) : Json(nullptr)},
                          {"missing_logs", missing_logs},
                          {"gap_warnings", gap_warnings},
                          {"conditions", std::move(conditions)},
                          {"friedman", std::move(tests)}};
    report.table = format_table(rows) + "\n" + format_table(ftable);
    return report;
}

std::vector<std::filesystem::path> write_morph_frames(int steps, const SphericalRotation& rotation,
                                                      double graticule_spacing, int size_px,
                                                      const Coastlines* coast, const std::filesystem::path& dir) {
    if (steps < 2) throw InvalidArgument("morph: steps must be at least 2");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw OutputError("cannot create directory " + dir.string());
    std::vector<std::filesystem::path> files;
    for (int i = 0; i < steps; ++i) {
        const double t = i == steps - 1 ? 1.0 : static_cast<double>(i) / (steps - 1);
        char name[32];
        std::snprintf(name, sizeof name, "frame_%03d.svg", i);
        const auto file = dir / name;
        write_text_file(file, to_svg(build_morph_frame(t, rotation, graticule_spacing, size_px, coast)));
        files.push_back(file);
    }
    return files;
}

namespace {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("TERRALENS_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw InvalidArgument(std::string("TERRALENS_SEED is not an unsigned integer: ") + env);
    }
    return 0;
}

void emit_json(const Json& j, const std::string& out) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text_file(out, text);
    }
}

std::optional<Coastlines> load_coastlines(const std::string& file) {
    if (file.empty()) return std::nullopt;
    return read_geojson(file);
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"terralens: maps, stimuli and analysis for immersive geographic visualisation studies"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::string rotation_text = "0,0,0";
    std::string out;
    std::string coast_file;
    double graticule_spacing = 10.0;
    int size_px = 1024;

    // render
    auto* render = app.add_subcommand("render", "Render the flat map or a curved-map preview");
    double tissot_spacing = 30.0;
    std::string projection = "flat";
    std::string format;
    render->add_option("--rotation", rotation_text, "lambda,phi[,gamma] in degrees");
    render->add_option("--graticule", graticule_spacing, "Graticule spacing in degrees (0 disables)");
    render->add_option("--tissot", tissot_spacing, "Indicatrix grid spacing in degrees (0 disables)");
    render->add_option("--projection", projection, "flat | curved-preview")
        ->check(CLI::IsMember({"flat", "curved-preview"}));
    render->add_option("--size", size_px, "Image width in pixels");
    render->add_option("--coastlines", coast_file, "GeoJSON coastline file");
    render->add_option("--format", format, "svg | png (default from the file extension)")
        ->check(CLI::IsMember({"svg", "png"}));
    render->add_option("--out", out, "Output image")->required();

    // morph
    auto* morph_cmd = app.add_subcommand("morph", "Export flat-map to globe morph frames as SVG");
    int steps = 10;
    morph_cmd->add_option("--steps", steps, "Number of frames (>= 2)");
    morph_cmd->add_option("--rotation", rotation_text, "lambda,phi[,gamma] in degrees");
    morph_cmd->add_option("--graticule", graticule_spacing, "Graticule spacing in degrees (0 disables)");
    morph_cmd->add_option("--size", size_px, "Image width in pixels");
    morph_cmd->add_option("--coastlines", coast_file, "GeoJSON coastline file");
    morph_cmd->add_option("--out", out, "Output directory")->required();

    // generate
    auto* generate = app.add_subcommand("generate", "Generate stimuli with ground truth");
    std::string family = "distance";
    std::string difficulty = "easy";
    int count = 1;
    int participant = 0;
    generate->add_option("--family", family, "distance | area | direction | session")
        ->check(CLI::IsMember({"distance", "area", "direction", "session"}));
    generate->add_option("--difficulty", difficulty,
                         "easy | small-variation | far-distance (direction: close | far)");
    generate->add_option("--count", count, "Number of tasks");
    generate->add_option("--participant", participant, "Participant index (session family)");
    generate->add_option("--seed", seed, "Random seed (fallback: TERRALENS_SEED)");
    generate->add_option("--coastlines", coast_file, "GeoJSON land polygons; area polygons avoid land");
    generate->add_option("--out", out, "Output JSON (default stdout)");

    // session
    auto* session_cmd = app.add_subcommand("session", "Build one participant's full question list");
    session_cmd->add_option("--participant", participant, "Participant index");
    session_cmd->add_option("--seed", seed, "Random seed (fallback: TERRALENS_SEED)");
    session_cmd->add_option("--out", out, "Output JSON (default stdout)");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "Summarise responses and interaction logs");
    std::string responses_file;
    std::string logs_dir;
    std::string table_file;
    analyze_cmd->add_option("--responses", responses_file, "Responses CSV")->required();
    analyze_cmd->add_option("--logs", logs_dir, "Directory of per-response pose logs");
    analyze_cmd->add_option("--out", out, "Summary JSON (default stdout)");
    analyze_cmd->add_option("--table", table_file, "Text table (default stdout when --out is given)");

    // scene
    auto* scene_cmd = app.add_subcommand("scene", "Describe a visualisation for the viewer");
    std::string kind = "exocentric";
    scene_cmd->add_option("--kind", kind, "exocentric | flat | egocentric | curved")
        ->check(CLI::IsMember({"exocentric", "flat", "egocentric", "curved"}));
    scene_cmd->add_option("--rotation", rotation_text, "lambda,phi[,gamma] in degrees");
    scene_cmd->add_option("--out", out, "Output JSON (default stdout)");

    // golden
    auto* golden_cmd = app.add_subcommand("golden", "Export geo -> world reference samples");
    std::vector<std::string> golden_rotations;
    golden_cmd->add_option("--rotation", golden_rotations, "Rotation to sample (repeatable)");
    golden_cmd->add_option("--out", out, "Output JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*render) {
            check_spacing(graticule_spacing, "graticule", true);
            check_spacing(tissot_spacing, "tissot", true);
            const auto coast = load_coastlines(coast_file);
            RenderConfig cfg;
            cfg.projection = projection == "flat" ? ProjectionView::Flat : ProjectionView::CurvedPreview;
            cfg.rotation = parse_rotation(rotation_text);
            cfg.graticule_spacing = graticule_spacing;
            cfg.tissot_spacing = tissot_spacing;
            cfg.size_px = size_px;
            cfg.output = out;
            if (format.empty()) format = cfg.output.extension() == ".png" ? "png" : "svg";
            cfg.format = format == "png" ? ImageFormat::Png : ImageFormat::Svg;
            const Drawing d = build_map_drawing(cfg, coast ? &*coast : nullptr);
            if (cfg.format == ImageFormat::Png) {
                write_png(d, cfg.output);
            } else {
                write_text_file(cfg.output, to_svg(d));
            }
        } else if (*morph_cmd) {
            check_spacing(graticule_spacing, "graticule", true);
            const auto coast = load_coastlines(coast_file);
            write_morph_frames(steps, parse_rotation(rotation_text), graticule_spacing, size_px,
                               coast ? &*coast : nullptr, out);
        } else if (*generate) {
            const std::uint64_t s = resolve_seed(seed);
            if (family == "session") {
                emit_json(to_json(build_session(participant, s)), out);
            } else {
                const auto land = load_coastlines(coast_file);
                emit_json(generate_tasks(task_family_from_string(family), difficulty, count, s,
                                         land ? &*land : nullptr),
                          out);
            }
        } else if (*session_cmd) {
            emit_json(to_json(build_session(participant, resolve_seed(seed))), out);
        } else if (*analyze_cmd) {
            const auto records = read_responses_csv(responses_file);
            const AnalysisReport report =
                analyze(records, logs_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(logs_dir));
            emit_json(report.summary, out);
            if (!table_file.empty()) {
                write_text_file(table_file, report.table);
            } else if (!out.empty() && out != "-") {
                std::cout << report.table;
            }
        } else if (*scene_cmd) {
            emit_json(to_json(SceneEmbedding{scene_kind_from_string(kind), parse_rotation(rotation_text), {}}), out);
        } else if (*golden_cmd) {
            std::vector<SphericalRotation> rotations;
            for (const std::string& r : golden_rotations) rotations.push_back(parse_rotation(r));
            if (rotations.empty()) rotations = {{0, 0, 0}, {30, -20, 10}, {0, 90, 0}, {-120, 45, -30}};
            emit_json(golden_vectors(rotations), out);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMalformedInput;
    } catch (const OutputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnwritable;
    } catch (const GenerationExhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitExhausted;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace terralens
