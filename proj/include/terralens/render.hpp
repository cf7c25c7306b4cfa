#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "terralens/io.hpp"
#include "terralens/scene.hpp"

namespace terralens {

/// Pixel position relative to the canvas centre, y pointing down.
struct Pixel {
    double x = 0.0;
    double y = 0.0;
};

struct DrawPath {
    std::string cls;
    std::vector<std::vector<Pixel>> parts;
    bool closed = false;
};

struct DrawEllipse {
    std::string cls;
    Pixel center;
    double rx = 0.0;
    double ry = 0.0;
    double angle_deg = 0.0;  // clockwise on screen, as SVG rotate()
    // Indicatrix values carried into the output for inspection.
    double lon = 0.0;
    double lat = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Output-independent geometry of one rendered image.
struct Drawing {
    int width = 0;
    int height = 0;
    std::optional<DrawEllipse> outline_ellipse;
    std::vector<DrawPath> paths;
    std::vector<DrawEllipse> ellipses;
};

enum class ProjectionView { Flat, CurvedPreview };
enum class ImageFormat { Svg, Png };

struct RenderConfig {
    ProjectionView projection = ProjectionView::Flat;
    SphericalRotation rotation;
    double graticule_spacing = 10.0;
    double tissot_spacing = 30.0;  // 0 disables the indicatrices
    int size_px = 1024;
    std::optional<std::filesystem::path> coastlines;
    std::filesystem::path output;
    ImageFormat format = ImageFormat::Svg;
};

/// Angular radius of the small circle each drawn indicatrix represents.
inline constexpr double kTissotCircleDeg = 4.0;

/// Flat Hammer map (graticule, coastlines, indicatrices) or a perspective
/// preview of the curved map from the viewer's head.
Drawing build_map_drawing(const RenderConfig& config, const Coastlines* coast);

/// Frame of the flat-map -> exocentric-globe morph, drawn as an orthographic
/// view along -z in the same pixel frame as the flat map. Frame t = 0 holds
/// exactly the flat map's line geometry.
Drawing build_morph_frame(double t, const SphericalRotation& rotation, double graticule_spacing, int size_px,
                          const Coastlines* coast);

/// Byte-stable SVG (fixed 3-decimal coordinates).
std::string to_svg(const Drawing& d);

void write_text_file(const std::filesystem::path& file, const std::string& text);
void write_png(const Drawing& d, const std::filesystem::path& file);

/// Scan-converts the drawing into an RGB buffer (row-major, 3 bytes/pixel).
std::vector<unsigned char> rasterize(const Drawing& d);

}  // namespace terralens
