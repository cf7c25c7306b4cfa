#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "terralens/analytics.hpp"
#include "terralens/cli.hpp"
#include "terralens/io.hpp"
#include "terralens/projection.hpp"
#include "terralens/render.hpp"
#include "terralens/scene.hpp"
#include "terralens/stimuli.hpp"

namespace py = pybind11;
using namespace terralens;

namespace {

using Rotation = std::tuple<double, double, double>;

SphericalRotation rot(const Rotation& r) { return {std::get<0>(r), std::get<1>(r), std::get<2>(r)}; }

std::tuple<double, double, double> xyz(const WorldPoint& w) { return {w.x, w.y, w.z}; }

SceneEmbedding scene(const std::string& kind, const Rotation& r) { return {scene_kind_from_string(kind), rot(r), {}}; }

}  // namespace

PYBIND11_MODULE(_terralens, m) {
    m.doc() = "Native core of terralens";

    static py::exception<Error> base(m, "Error", PyExc_ValueError);
    static py::exception<ParseError> parse(m, "ParseError", base.ptr());
    static py::exception<OutputError> output(m, "OutputError", base.ptr());
    static py::exception<GenerationExhausted> exhausted(m, "GenerationExhausted", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            PyErr_SetString(parse.ptr(), e.what());
        } catch (const OutputError& e) {
            PyErr_SetString(output.ptr(), e.what());
        } catch (const GenerationExhausted& e) {
            PyErr_SetString(exhausted.ptr(), e.what());
        } catch (const Error& e) {
            PyErr_SetString(base.ptr(), e.what());
        }
    });

    m.def("hammer_forward", [](double lon, double lat) {
        const MapPoint p = hammer_forward({lon, lat});
        return std::pair{p.x, p.y};
    }, py::arg("lon"), py::arg("lat"));
    m.def("hammer_inverse", [](double x, double y) {
        const GeoCoord g = hammer_inverse({x, y});
        return std::pair{g.lon(), g.lat()};
    }, py::arg("x"), py::arg("y"));
    m.def("tissot", [](double lon, double lat) {
        const TissotEllipse t = tissot({lon, lat});
        return py::dict(py::arg("semi_major") = t.semi_major, py::arg("semi_minor") = t.semi_minor,
                        py::arg("orientation") = t.orientation);
    }, py::arg("lon"), py::arg("lat"));
    m.def("rotate", [](const Rotation& r, double lon, double lat) {
        const GeoCoord g = rotate(rot(r), {lon, lat});
        return std::pair{g.lon(), g.lat()};
    }, py::arg("rotation"), py::arg("lon"), py::arg("lat"));
    m.def("great_circle_distance", [](double lon1, double lat1, double lon2, double lat2) {
        return great_circle_distance({lon1, lat1}, {lon2, lat2});
    });

    m.def("embed", [](const std::string& kind, const Rotation& r, double lon, double lat) {
        return xyz(embed(scene(kind, r), {lon, lat}));
    }, py::arg("kind"), py::arg("rotation"), py::arg("lon"), py::arg("lat"));
    m.def("morph", [](double t, const Rotation& r, double lon, double lat) { return xyz(morph(t, {lon, lat}, rot(r))); },
          py::arg("t"), py::arg("rotation"), py::arg("lon"), py::arg("lat"));
    m.def("scene_json", [](const std::string& kind, const Rotation& r) { return to_json(scene(kind, r)).dump(); });
    m.def("golden_json", [](const std::vector<Rotation>& rotations) {
        std::vector<SphericalRotation> rs;
        for (const Rotation& r : rotations) rs.push_back(rot(r));
        return golden_vectors(rs).dump();
    });

    m.def("generate_json", [](const std::string& family, const std::string& difficulty, int count, std::uint64_t seed,
                              std::optional<std::filesystem::path> coastlines) {
        std::optional<Coastlines> land;
        if (coastlines) land = read_geojson(*coastlines);
        return generate_tasks(task_family_from_string(family), difficulty, count, seed, land ? &*land : nullptr).dump();
    }, py::arg("family"), py::arg("difficulty"), py::arg("count"), py::arg("seed"), py::arg("coastlines") = py::none());
    m.def("session_json", [](int participant, std::uint64_t seed) { return to_json(build_session(participant, seed)).dump(); });

    m.def("accuracy_score", &accuracy_score, py::arg("correct"), py::arg("total"));
    m.def("mean_ci", [](const std::vector<double>& v) {
        const MeanCI c = mean_ci(v);
        return py::dict(py::arg("mean") = c.mean, py::arg("lo") = c.lo, py::arg("hi") = c.hi, py::arg("n") = c.n);
    });
    m.def("friedman", [](const std::vector<std::vector<double>>& matrix) {
        const FriedmanResult f = friedman(matrix);
        return py::dict(py::arg("chi2") = f.chi2, py::arg("dof") = f.dof, py::arg("p") = f.p);
    });
    m.def("analyze_json", [](const std::filesystem::path& responses, std::optional<std::filesystem::path> logs) {
        const AnalysisReport r = analyze(read_responses_csv(responses), logs);
        return std::pair{r.summary.dump(), r.table};
    }, py::arg("responses"), py::arg("logs") = py::none());

    m.def("render_svg", [](const Rotation& r, double graticule, double tissot_spacing, int size, const std::string& projection,
                           std::optional<std::filesystem::path> coastlines) {
        RenderConfig cfg;
        cfg.rotation = rot(r);
        cfg.graticule_spacing = graticule;
        cfg.tissot_spacing = tissot_spacing;
        cfg.size_px = size;
        if (projection == "curved-preview") cfg.projection = ProjectionView::CurvedPreview;
        else if (projection != "flat") throw InvalidArgument("projection must be flat or curved-preview");
        std::optional<Coastlines> coast;
        if (coastlines) coast = read_geojson(*coastlines);
        return to_svg(build_map_drawing(cfg, coast ? &*coast : nullptr));
    }, py::arg("rotation") = Rotation{0, 0, 0}, py::arg("graticule") = 10.0, py::arg("tissot") = 30.0,
       py::arg("size") = 1024, py::arg("projection") = "flat", py::arg("coastlines") = py::none());
    m.def("morph_svg", [](double t, const Rotation& r, double graticule, int size) {
        return to_svg(build_morph_frame(t, rot(r), graticule, size, nullptr));
    }, py::arg("t"), py::arg("rotation") = Rotation{0, 0, 0}, py::arg("graticule") = 10.0, py::arg("size") = 1024);
}
