#pragma once
// Small hand-rolled SVG charts for sweep and prediction artifacts. No
// external renderer: the output is plain SVG 1.1 markup.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "playtest/errors.hpp"
#include "playtest/io.hpp"
#include "playtest/stats.hpp"

namespace playtest {
namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f6fb2", "#d1495b", "#3a7d44", "#8a5fbf", "#c98a1c", "#4a4a4a"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

struct SvgCanvas {
    std::string body;
    double width;
    double height;

    SvgCanvas(double w, double h) : width(w), height(h) {}

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0, const std::string& dash = {}) {
        body += "<line x1=\"" + svg_num(x1) + "\" y1=\"" + svg_num(y1) + "\" x2=\"" + svg_num(x2) +
                "\" y2=\"" + svg_num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
                svg_num(stroke_width) + "\"";
        if (!dash.empty()) body += " stroke-dasharray=\"" + dash + "\"";
        body += "/>\n";
    }

    void circle(double cx, double cy, double r, const std::string& fill) {
        body += "<circle cx=\"" + svg_num(cx) + "\" cy=\"" + svg_num(cy) + "\" r=\"" + svg_num(r) +
                "\" fill=\"" + fill + "\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
        if (pts.size() < 2) return;
        body += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body += ' ';
            body += svg_num(pts[i].first) + "," + svg_num(pts[i].second);
        }
        body += "\"/>\n";
    }

    void text(double x, double y, const std::string& s, double size = 11.0,
              const std::string& anchor = "start") {
        body += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) + "\" font-size=\"" + svg_num(size) +
                "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\" fill=\"#222\">" + s +
                "</text>\n";
    }

    std::string finish() const {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(width) + "\" height=\"" +
               svg_num(height) + "\" viewBox=\"0 0 " + svg_num(width) + " " + svg_num(height) +
               "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n" + body + "</svg>\n";
    }
};

// Maps data coordinates into one plot panel with axes and tick labels.
struct Panel {
    double x0, y0, w, h;  // pixel rect of the data area
    double xmin, xmax, ymin, ymax;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }

    void draw_frame(SvgCanvas& c, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel) const {
        c.line(x0, y0 + h, x0 + w, y0 + h, "#222");
        c.line(x0, y0, x0, y0 + h, "#222");
        for (int i = 0; i <= 4; ++i) {
            const double fx = xmin + (xmax - xmin) * i / 4.0;
            const double fy = ymin + (ymax - ymin) * i / 4.0;
            c.line(px(fx), y0 + h, px(fx), y0 + h + 4, "#222");
            c.text(px(fx), y0 + h + 16, svg_num(fx), 9.0, "middle");
            c.line(x0 - 4, py(fy), x0, py(fy), "#222");
            c.text(x0 - 6, py(fy) + 3, svg_num(fy), 9.0, "end");
        }
        c.text(x0 + w / 2.0, y0 - 8, title, 12.0, "middle");
        c.text(x0 + w / 2.0, y0 + h + 30, xlabel, 10.0, "middle");
        c.text(x0 - 34, y0 - 8, ylabel, 10.0, "start");
    }
};

}  // namespace detail

// Rank-correlation sweep: one line per feature across best-run fractions.
inline std::string render_sweep_svg(const std::vector<SweepCell>& cells) {
    if (cells.empty()) throw ContractViolation("render_sweep_svg: no cells");
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    double rho_min = 1.0;
    double rho_max = -1.0;
    for (const auto& cell : cells) {
        if (!cell.rho) continue;
        series[cell.feature].push_back({cell.fraction, *cell.rho});
        rho_min = std::min(rho_min, *cell.rho);
        rho_max = std::max(rho_max, *cell.rho);
    }
    if (series.empty()) throw ContractViolation("render_sweep_svg: every cell is undefined");
    rho_min = std::min(rho_min, 0.0) - 0.05;
    rho_max = std::max(rho_max, 0.0) + 0.05;

    detail::SvgCanvas canvas(560, 360);
    detail::Panel panel{60, 40, 360, 260, 0.0, 1.0, rho_min, rho_max};
    panel.draw_frame(canvas, "rank correlation vs best-run fraction", "fraction", "rho");
    canvas.line(panel.px(0.0), panel.py(0.0), panel.px(1.0), panel.py(0.0), "#bbb", 1.0, "4,3");

    std::size_t idx = 0;
    for (auto& [feature, pts] : series) {
        std::sort(pts.begin(), pts.end());
        std::vector<std::pair<double, double>> pixel_pts;
        for (const auto& [f, r] : pts) pixel_pts.push_back({panel.px(f), panel.py(r)});
        const std::string color = detail::series_color(idx);
        canvas.polyline(pixel_pts, color);
        for (const auto& [x, y] : pixel_pts) canvas.circle(x, y, 2.5, color);
        canvas.circle(440, 60 + 18.0 * static_cast<double>(idx), 4, color);
        canvas.text(450, 64 + 18.0 * static_cast<double>(idx), feature, 10.0);
        ++idx;
    }
    return canvas.finish();
}

namespace detail {

// Blue-to-red ramp over the level sequence.
inline std::string level_color(std::size_t index, std::size_t count) {
    const double t = count <= 1 ? 0.0 : static_cast<double>(index) / static_cast<double>(count - 1);
    const int r = static_cast<int>(std::lround(31 + t * (209 - 31)));
    const int g = static_cast<int>(std::lround(111 + t * (73 - 111)));
    const int b = static_cast<int>(std::lround(178 + t * (91 - 178)));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace detail

// Pass rate vs churn rate, one observed and one predicted point per level,
// colored by position in the level sequence and joined by a faint segment.
inline std::string render_predictions_svg(const std::vector<PredictionRow>& rows) {
    if (rows.empty()) throw ContractViolation("render_predictions_svg: no rows");
    double churn_max = 0.0;
    for (const auto& r : rows) churn_max = std::max({churn_max, r.churn_true, r.churn_pred});
    churn_max = std::min(1.0, std::max(0.1, churn_max * 1.25));

    detail::SvgCanvas canvas(560, 380);
    detail::Panel panel{60, 40, 400, 280, 0.0, 1.0, 0.0, churn_max};
    panel.draw_frame(canvas, "pass rate vs churn rate by level", "pass rate", "churn rate");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string color = detail::level_color(i, rows.size());
        const double tx = panel.px(std::clamp(r.pass_true, 0.0, 1.0));
        const double ty = panel.py(std::clamp(r.churn_true, 0.0, churn_max));
        const double px = panel.px(std::clamp(r.pass_pred, 0.0, 1.0));
        const double py = panel.py(std::clamp(r.churn_pred, 0.0, churn_max));
        canvas.line(tx, ty, px, py, "#cccccc");
        canvas.circle(tx, ty, 4.0, color);
        canvas.body += "<circle cx=\"" + detail::svg_num(px) + "\" cy=\"" + detail::svg_num(py) +
                       "\" r=\"4\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
        canvas.text(tx + 6, ty - 6, format_int(r.level_id), 8.0);
    }
    canvas.circle(480, 60, 4, "#555");
    canvas.text(490, 64, "observed", 10.0);
    canvas.body += "<circle cx=\"480\" cy=\"78\" r=\"4\" fill=\"none\" stroke=\"#555\" stroke-width=\"1.5\"/>\n";
    canvas.text(490, 82, "predicted", 10.0);
    return canvas.finish();
}

}  // namespace playtest
