#include "terralens/render.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>

#include <png.h>

namespace terralens {

namespace {

constexpr double kResampleDeg = 1.0;

// Pixels per metre: the flat quad spans the canvas width.
double pixels_per_metre(int size_px, const SceneParams& p) { return size_px / p.flat_width; }

struct LineSource {
    std::string cls;
    GeoPath path;
};

std::vector<LineSource> collect_lines(double graticule_spacing, const Coastlines* coast) {
    std::vector<LineSource> out;
    if (coast) {
        for (const GeoPath& p : coast->paths) out.push_back({p.closed ? "coast" : "coastline", p});
    }
    if (graticule_spacing > 0.0) {
        for (GraticuleLine& line : graticule(graticule_spacing)) {
            std::string cls = line.kind == GraticuleKind::Meridian ? "meridian" : "parallel";
            if (line.emphasized) cls += " equator";
            out.push_back({std::move(cls), std::move(line.path)});
        }
    }
    return out;
}

using FrameToPixel = std::function<Pixel(const GeoCoord&)>;

DrawPath draw_line(const LineSource& src, const SphericalRotation& rotation, const FrameToPixel& to_px) {
    const GeoPath prepared = prepare_path(src.path, rotation, kResampleDeg);
    DrawPath dp{src.cls, {}, prepared.closed};
    for (const auto& seg : prepared.segments) {
        std::vector<Pixel> part;
        part.reserve(seg.size());
        for (const GeoCoord& f : seg) part.push_back(to_px(f));
        if (part.size() >= 2) dp.parts.push_back(std::move(part));
    }
    return dp;
}

std::vector<Pixel> map_edge(const FrameToPixel& to_px) {
    std::vector<Pixel> out;
    for (int lat = -90; lat <= 90; ++lat) out.push_back(to_px(GeoCoord(180.0, lat)));
    for (int lat = 89; lat >= -89; --lat) out.push_back(to_px(GeoCoord(-180.0, lat)));
    return out;
}

void fmt_num(std::string& out, double v) {
    char buf[64];
    double r = std::round(v * 1000.0) / 1000.0;
    if (r == 0.0) r = 0.0;  // no "-0.000"
    std::snprintf(buf, sizeof buf, "%.3f", r);
    out += buf;
}

std::string path_data(const DrawPath& p) {
    std::string d;
    for (const auto& part : p.parts) {
        for (std::size_t i = 0; i < part.size(); ++i) {
            d += i == 0 ? 'M' : 'L';
            fmt_num(d, part[i].x);
            d += ',';
            fmt_num(d, part[i].y);
        }
        if (p.closed) d += 'Z';
    }
    return d;
}

// ---- rasterizer

struct Rgb {
    unsigned char r, g, b;
};

class Canvas {
public:
    Canvas(int w, int h) : w_(w), h_(h), px_(static_cast<std::size_t>(w) * h * 3, 255) {}

    void blend(int x, int y, Rgb c, double alpha) {
        if (x < 0 || y < 0 || x >= w_ || y >= h_ || alpha <= 0.0) return;
        alpha = std::min(alpha, 1.0);
        unsigned char* p = &px_[(static_cast<std::size_t>(y) * w_ + x) * 3];
        p[0] = static_cast<unsigned char>(std::lround(p[0] + (c.r - p[0]) * alpha));
        p[1] = static_cast<unsigned char>(std::lround(p[1] + (c.g - p[1]) * alpha));
        p[2] = static_cast<unsigned char>(std::lround(p[2] + (c.b - p[2]) * alpha));
    }

    // Even-odd fill of a set of rings, sampled at pixel centres.
    void fill(const std::vector<std::vector<Pixel>>& rings, Rgb c, double alpha) {
        std::vector<double> xs;
        for (int y = 0; y < h_; ++y) {
            const double sy = y + 0.5 - 0.5 * h_;
            xs.clear();
            for (const auto& ring : rings) {
                const std::size_t n = ring.size();
                for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                    const Pixel& a = ring[i];
                    const Pixel& b = ring[j];
                    if ((a.y > sy) != (b.y > sy)) xs.push_back(a.x + (sy - a.y) * (b.x - a.x) / (b.y - a.y));
                }
            }
            std::sort(xs.begin(), xs.end());
            for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
                const int x0 = static_cast<int>(std::ceil(xs[k] + 0.5 * w_ - 0.5));
                const int x1 = static_cast<int>(std::floor(xs[k + 1] + 0.5 * w_ - 0.5));
                for (int x = std::max(x0, 0); x <= std::min(x1, w_ - 1); ++x) blend(x, y, c, alpha);
            }
        }
    }

    // Anti-aliased segment from distance-to-segment coverage.
    void stroke(Pixel a, Pixel b, double width, Rgb c, double alpha) {
        const double ax = a.x + 0.5 * w_, ay = a.y + 0.5 * h_;
        const double bx = b.x + 0.5 * w_, by = b.y + 0.5 * h_;
        const double half = 0.5 * width;
        const int x0 = static_cast<int>(std::floor(std::min(ax, bx) - half - 1));
        const int x1 = static_cast<int>(std::ceil(std::max(ax, bx) + half + 1));
        const int y0 = static_cast<int>(std::floor(std::min(ay, by) - half - 1));
        const int y1 = static_cast<int>(std::ceil(std::max(ay, by) + half + 1));
        const double dx = bx - ax, dy = by - ay;
        const double len2 = dx * dx + dy * dy;
        for (int y = std::max(y0, 0); y <= std::min(y1, h_ - 1); ++y) {
            for (int x = std::max(x0, 0); x <= std::min(x1, w_ - 1); ++x) {
                const double px = x + 0.5, py = y + 0.5;
                double t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
                t = std::clamp(t, 0.0, 1.0);
                const double ex = ax + t * dx - px, ey = ay + t * dy - py;
                const double cov = std::clamp(half + 0.5 - std::sqrt(ex * ex + ey * ey), 0.0, 1.0);
                blend(x, y, c, cov * alpha);
            }
        }
    }

    void stroke_path(const std::vector<Pixel>& pts, bool closed, double width, Rgb c, double alpha) {
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) stroke(pts[i], pts[i + 1], width, c, alpha);
        if (closed && pts.size() > 2) stroke(pts.back(), pts.front(), width, c, alpha);
    }

    const std::vector<unsigned char>& pixels() const { return px_; }

private:
    int w_, h_;
    std::vector<unsigned char> px_;
};

std::vector<Pixel> ellipse_points(const DrawEllipse& e, int n = 96) {
    std::vector<Pixel> out;
    const double c = std::cos(radians(e.angle_deg)), s = std::sin(radians(e.angle_deg));
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * i / n;
        const double x = e.rx * std::cos(t), y = e.ry * std::sin(t);
        out.push_back({e.center.x + c * x - s * y, e.center.y + s * x + c * y});
    }
    return out;
}

struct Style {
    Rgb stroke;
    double width;
    std::optional<Rgb> fill;
    double alpha = 1.0;
};

Style style_for(const std::string& cls) {
    if (cls.starts_with("coast")) return {{85, 85, 85}, 0.6, cls == "coast" ? std::optional<Rgb>({232, 225, 200}) : std::nullopt};
    if (cls.find("back") != std::string::npos) return {{205, 205, 205}, 0.5, std::nullopt};
    if (cls.find("equator") != std::string::npos) return {{90, 90, 90}, 1.5, std::nullopt};
    if (cls == "seam") return {{51, 51, 51}, 1.0, std::nullopt};
    if (cls == "outline") return {{51, 51, 51}, 1.0, Rgb{235, 242, 250}};
    return {{140, 140, 140}, 0.5, std::nullopt};
}

}  // namespace

Drawing build_map_drawing(const RenderConfig& config, const Coastlines* coast) {
    if (config.size_px <= 0) throw InvalidArgument("render: size must be positive");
    const SceneParams params;
    Drawing d;
    d.width = config.size_px;
    const std::vector<LineSource> lines = collect_lines(config.graticule_spacing, coast);

    if (config.projection == ProjectionView::Flat) {
        d.height = static_cast<int>(std::lround(config.size_px * params.flat_height / params.flat_width));
        const double k = pixels_per_metre(config.size_px, params);
        const SceneEmbedding flat{SceneKind::FlatMap, {}, params};
        const FrameToPixel to_px = [&](const GeoCoord& f) {
            const WorldPoint w = embed_frame(flat, f);
            return Pixel{w.x * k, -w.y * k};
        };
        d.outline_ellipse = DrawEllipse{"outline", {0.0, 0.0}, 0.5 * params.flat_width * k,
                                        0.5 * params.flat_height * k, 0.0};
        for (const LineSource& src : lines) d.paths.push_back(draw_line(src, config.rotation, to_px));

        if (config.tissot_spacing > 0.0) {
            const double plane_to_px = params.flat_width / (2.0 * kHammerHalfWidth) * k;
            const double circle = radians(kTissotCircleDeg);
            std::vector<GeoCoord> nodes{GeoCoord(0.0, -90.0)};
            for (double lat = -90.0 + config.tissot_spacing; lat < 90.0 - 1e-9; lat += config.tissot_spacing) {
                for (double lon = -180.0; lon < 180.0 - 1e-9; lon += config.tissot_spacing) nodes.emplace_back(lon, lat);
            }
            nodes.emplace_back(0.0, 90.0);
            for (const GeoCoord& g : nodes) {
                const GeoCoord f = rotate(config.rotation, g);
                if (std::abs(f.lat()) >= 89.0) continue;
                const TissotEllipse te = tissot(f);
                const Pixel c = to_px(f);
                d.ellipses.push_back(DrawEllipse{"tissot", c, te.semi_major * circle * plane_to_px,
                                                 te.semi_minor * circle * plane_to_px, -te.orientation, g.lon(),
                                                 g.lat(), te.semi_major, te.semi_minor});
            }
        }
    } else {
        // Pinhole view from the head; the horizontal field just covers the section.
        d.height = static_cast<int>(std::lround(config.size_px * 0.6));
        const SceneEmbedding curved{SceneKind::CurvedMap, {}, params};
        const double focal = 0.5 * config.size_px / std::tan(radians(0.5 * params.curved_span_h + 4.0));
        const FrameToPixel to_px = [&](const GeoCoord& f) {
            const WorldPoint w = embed_frame(curved, f);
            return Pixel{focal * w.x / -w.z, -focal * w.y / -w.z};
        };
        d.paths.push_back(DrawPath{"outline", {map_edge(to_px)}, true});
        for (const LineSource& src : lines) d.paths.push_back(draw_line(src, config.rotation, to_px));
    }
    return d;
}

Drawing build_morph_frame(double t, const SphericalRotation& rotation, double graticule_spacing, int size_px,
                          const Coastlines* coast) {
    if (size_px <= 0) throw InvalidArgument("morph: size must be positive");
    const SceneParams params;
    Drawing d;
    d.width = size_px;
    // Tall enough for the globe's full diameter.
    d.height = static_cast<int>(std::lround(size_px * 2.2 * params.exo_radius / params.flat_width));
    const double k = pixels_per_metre(size_px, params);
    const FrameToPixel to_px = [&](const GeoCoord& f) {
        const WorldPoint w = morph_frame(t, f, params);
        return Pixel{w.x * k, -w.y * k};
    };
    if (t == 0.0) {
        d.outline_ellipse = DrawEllipse{"outline", {0.0, 0.0}, 0.5 * params.flat_width * k,
                                        0.5 * params.flat_height * k, 0.0};
    } else if (t == 1.0) {
        d.outline_ellipse = DrawEllipse{"outline", {0.0, 0.0}, params.exo_radius * k, params.exo_radius * k, 0.0};
    }

    std::vector<LineSource> lines = collect_lines(graticule_spacing, coast);
    if (t > 0.0) {
        // Frame antimeridian: the map edge, which becomes a seam on the globe.
        GeoPath seam{{{}}, false};
        for (int lat = -90; lat <= 90; ++lat) seam.segments[0].emplace_back(180.0, lat);
        lines.push_back({"seam", std::move(seam)});
    }
    for (const LineSource& src : lines) {
        if (t == 0.0) {
            d.paths.push_back(draw_line(src, rotation, to_px));
            continue;
        }
        const std::string cls = src.cls;
        // Split into runs on the near and far side of the globe.
        const GeoPath prepared =
            src.cls == "seam" ? src.path : prepare_path(src.path, rotation, kResampleDeg);
        DrawPath front{cls, {}, false};
        DrawPath back{cls + " back", {}, false};
        for (const auto& seg : prepared.segments) {
            std::vector<Pixel> run;
            bool run_front = true;
            for (std::size_t i = 0; i < seg.size(); ++i) {
                const bool is_front = to_vector(seg[i]).x >= 0.0;
                if (i > 0 && is_front != run_front) {
                    run.push_back(to_px(seg[i]));
                    if (run.size() >= 2) (run_front ? front : back).parts.push_back(run);
                    run = {to_px(seg[i - 1])};
                }
                run_front = is_front;
                if (run.empty() || i > 0) run.push_back(to_px(seg[i]));
            }
            if (run.size() >= 2) (run_front ? front : back).parts.push_back(std::move(run));
        }
        if (!back.parts.empty()) d.paths.push_back(std::move(back));
        if (!front.parts.empty()) d.paths.push_back(std::move(front));
    }
    return d;
}

std::string to_svg(const Drawing& d) {
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(d.width) + "\" height=\"" +
         std::to_string(d.height) + "\" viewBox=\"";
    fmt_num(s, -0.5 * d.width);
    s += ' ';
    fmt_num(s, -0.5 * d.height);
    s += ' ' + std::to_string(d.width) + ' ' + std::to_string(d.height) + "\">\n";
    s += "<style>"
         ".outline{fill:#ebf2fa;stroke:#333;stroke-width:1}"
         ".coast{fill:#e8e1c8;fill-rule:evenodd;stroke:#555;stroke-width:0.6}"
         ".coastline{fill:none;stroke:#555;stroke-width:0.6}"
         ".meridian,.parallel{fill:none;stroke:#8c8c8c;stroke-width:0.5}"
         ".equator{stroke:#5a5a5a;stroke-width:1.5}"
         ".seam{fill:none;stroke:#333;stroke-width:1}"
         ".back{stroke:#cdcdcd;stroke-width:0.5;fill:none}"
         ".tissot{fill:#c82828;fill-opacity:0.5;stroke:none}"
         "</style>\n";
    s += "<rect x=\"";
    fmt_num(s, -0.5 * d.width);
    s += "\" y=\"";
    fmt_num(s, -0.5 * d.height);
    s += "\" width=\"" + std::to_string(d.width) + "\" height=\"" + std::to_string(d.height) +
         "\" fill=\"#ffffff\"/>\n";
    if (d.outline_ellipse) {
        const DrawEllipse& e = *d.outline_ellipse;
        s += "<ellipse class=\"outline\" cx=\"";
        fmt_num(s, e.center.x);
        s += "\" cy=\"";
        fmt_num(s, e.center.y);
        s += "\" rx=\"";
        fmt_num(s, e.rx);
        s += "\" ry=\"";
        fmt_num(s, e.ry);
        s += "\"/>\n";
    }
    for (const DrawPath& p : d.paths) {
        s += "<path class=\"" + p.cls + "\" d=\"" + path_data(p) + "\"/>\n";
    }
    for (const DrawEllipse& e : d.ellipses) {
        s += "<ellipse class=\"" + e.cls + "\" cx=\"";
        fmt_num(s, e.center.x);
        s += "\" cy=\"";
        fmt_num(s, e.center.y);
        s += "\" rx=\"";
        fmt_num(s, e.rx);
        s += "\" ry=\"";
        fmt_num(s, e.ry);
        s += "\" transform=\"rotate(";
        fmt_num(s, e.angle_deg);
        s += ' ';
        fmt_num(s, e.center.x);
        s += ' ';
        fmt_num(s, e.center.y);
        s += ")\" data-lon=\"";
        fmt_num(s, e.lon);
        s += "\" data-lat=\"";
        fmt_num(s, e.lat);
        char buf[64];
        std::snprintf(buf, sizeof buf, "\" data-a=\"%.6f\" data-b=\"%.6f\"/>\n", e.a, e.b);
        s += buf;
    }
    s += "</svg>\n";
    return s;
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + file.string());
    out << text;
    out.flush();
    if (!out) throw OutputError("failed writing " + file.string());
}

std::vector<unsigned char> rasterize(const Drawing& d) {
    Canvas c(d.width, d.height);
    if (d.outline_ellipse) {
        const auto pts = ellipse_points(*d.outline_ellipse, 360);
        const Style st = style_for("outline");
        c.fill({pts}, *st.fill, 1.0);
        c.stroke_path(pts, true, st.width, st.stroke, 1.0);
    }
    for (const DrawPath& p : d.paths) {
        const Style st = style_for(p.cls);
        if (p.closed && st.fill) c.fill(p.parts, *st.fill, st.alpha);
        for (const auto& part : p.parts) c.stroke_path(part, p.closed, st.width, st.stroke, st.alpha);
    }
    for (const DrawEllipse& e : d.ellipses) c.fill({ellipse_points(e)}, {200, 40, 40}, 0.5);
    return c.pixels();
}

void write_png(const Drawing& d, const std::filesystem::path& file) {
    const std::vector<unsigned char> px = rasterize(d);
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(file.c_str(), "wb"), &std::fclose);
    if (!fp) throw OutputError("cannot write " + file.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw OutputError("png: cannot allocate writer");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw OutputError("png: write failed for " + file.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(d.width), static_cast<png_uint_32>(d.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < d.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(&px[static_cast<std::size_t>(y) * d.width * 3]));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace terralens
