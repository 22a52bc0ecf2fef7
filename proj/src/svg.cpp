#include "ssae/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ssae::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;  // data range
    double px0, px1, py0, py1;  // pixel box (py0 = top)

    double px(double x) const {
        const double span = x1 - x0;
        return span > 0.0 ? px0 + (x - x0) / span * (px1 - px0) : 0.5 * (px0 + px1);
    }
    double py(double y) const {
        const double span = y1 - y0;
        return span > 0.0 ? py1 - (y - y0) / span * (py1 - py0) : 0.5 * (py0 + py1);
    }
};

void pad_range(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
        return;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
}

void draw_axes(std::ostringstream& out, const Frame& f, const std::string& xlabel,
               const std::string& ylabel, int ticks = 5) {
    out << "<rect x='" << fmt(f.px0) << "' y='" << fmt(f.py0) << "' width='"
        << fmt(f.px1 - f.px0) << "' height='" << fmt(f.py1 - f.py0)
        << "' fill='none' stroke='#333333' stroke-width='1'/>\n";
    for (int t = 0; t <= ticks; ++t) {
        const double fx = f.x0 + (f.x1 - f.x0) * t / ticks;
        const double fy = f.y0 + (f.y1 - f.y0) * t / ticks;
        const double sx = f.px(fx);
        const double sy = f.py(fy);
        out << "<line x1='" << fmt(sx) << "' y1='" << fmt(f.py1) << "' x2='" << fmt(sx)
            << "' y2='" << fmt(f.py1 + 4) << "' stroke='#333333'/>\n";
        out << "<text x='" << fmt(sx) << "' y='" << fmt(f.py1 + 16)
            << "' font-size='10' text-anchor='middle'>" << fmt_tick(fx) << "</text>\n";
        out << "<line x1='" << fmt(f.px0 - 4) << "' y1='" << fmt(sy) << "' x2='" << fmt(f.px0)
            << "' y2='" << fmt(sy) << "' stroke='#333333'/>\n";
        out << "<text x='" << fmt(f.px0 - 6) << "' y='" << fmt(sy + 3)
            << "' font-size='10' text-anchor='end'>" << fmt_tick(fy) << "</text>\n";
    }
    out << "<text x='" << fmt(0.5 * (f.px0 + f.px1)) << "' y='" << fmt(f.py1 + 32)
        << "' font-size='12' text-anchor='middle'>" << escape(xlabel) << "</text>\n";
    out << "<text x='14' y='" << fmt(0.5 * (f.py0 + f.py1))
        << "' font-size='12' text-anchor='middle' transform='rotate(-90 14 "
        << fmt(0.5 * (f.py0 + f.py1)) << ")'>" << escape(ylabel) << "</text>\n";
}

std::string svg_open(int width, int height) {
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' viewBox='0 0 " << width << " " << height << "'>\n"
        << "<rect width='" << width << "' height='" << height << "' fill='#ffffff'/>\n";
    return out.str();
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel) {
    constexpr int width = 640, height = 420;
    double x0 = std::numeric_limits<double>::max(), x1 = std::numeric_limits<double>::lowest();
    double y0 = x0, y1 = x1;
    for (const auto& s : series)
        for (size_t i = 0; i < s.xs.size(); ++i) {
            x0 = std::min(x0, s.xs[i]);
            x1 = std::max(x1, s.xs[i]);
            y0 = std::min(y0, s.ys[i]);
            y1 = std::max(y1, s.ys[i]);
        }
    if (series.empty() || x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    pad_range(x0, x1);
    pad_range(y0, y1);

    Frame f{x0, x1, y0, y1, 56, width - 140.0, 36, height - 48.0};
    std::ostringstream out;
    out << svg_open(width, height);
    out << "<text x='" << fmt(0.5 * (f.px0 + f.px1)) << "' y='20' font-size='14' "
        << "text-anchor='middle' font-weight='bold'>" << escape(title) << "</text>\n";
    draw_axes(out, f, xlabel, ylabel);

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (size_t i = 0; i < series[s].xs.size(); ++i)
            out << fmt(f.px(series[s].xs[i])) << "," << fmt(f.py(series[s].ys[i])) << " ";
        out << "'/>\n";
        for (size_t i = 0; i < series[s].xs.size(); ++i)
            out << "<circle cx='" << fmt(f.px(series[s].xs[i])) << "' cy='"
                << fmt(f.py(series[s].ys[i])) << "' r='2.5' fill='" << color << "'/>\n";
        const double ly = f.py0 + 14.0 * static_cast<double>(s);
        out << "<rect x='" << fmt(f.px1 + 8) << "' y='" << fmt(ly) << "' width='10' height='10' fill='"
            << color << "'/>\n";
        out << "<text x='" << fmt(f.px1 + 22) << "' y='" << fmt(ly + 9) << "' font-size='11'>"
            << escape(series[s].name) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string scatter(const std::vector<ScatterPoint>& points,
                    const std::vector<std::string>& class_names, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel) {
    constexpr int width = 560, height = 460;
    double x0 = std::numeric_limits<double>::max(), x1 = std::numeric_limits<double>::lowest();
    double y0 = x0, y1 = x1;
    for (const auto& p : points) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    if (points.empty()) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    pad_range(x0, x1);
    pad_range(y0, y1);

    Frame f{x0, x1, y0, y1, 56, width - 120.0, 36, height - 48.0};
    std::ostringstream out;
    out << svg_open(width, height);
    out << "<text x='" << fmt(0.5 * (f.px0 + f.px1)) << "' y='20' font-size='14' "
        << "text-anchor='middle' font-weight='bold'>" << escape(title) << "</text>\n";
    draw_axes(out, f, xlabel, ylabel);

    for (const auto& p : points) {
        const char* color = kPalette[p.cls % kPaletteSize];
        out << "<circle cx='" << fmt(f.px(p.x)) << "' cy='" << fmt(f.py(p.y))
            << "' r='3' fill='" << color << "' fill-opacity='0.7'/>\n";
    }
    for (size_t c = 0; c < class_names.size(); ++c) {
        const double ly = f.py0 + 14.0 * static_cast<double>(c);
        out << "<circle cx='" << fmt(f.px1 + 14) << "' cy='" << fmt(ly + 5) << "' r='4' fill='"
            << kPalette[c % kPaletteSize] << "'/>\n";
        out << "<text x='" << fmt(f.px1 + 24) << "' y='" << fmt(ly + 9) << "' font-size='11'>"
            << escape(class_names[c]) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string heatmap_log(const Matrix& m, const std::string& title) {
    const Index rows = m.rows(), cols = m.cols();
    const double cell_w = std::max(1.0, std::min(8.0, 760.0 / std::max<Index>(cols, 1)));
    const double cell_h = std::max(1.0, std::min(8.0, 560.0 / std::max<Index>(rows, 1)));
    const double ox = 40, oy = 40;
    const int width = static_cast<int>(ox + cell_w * static_cast<double>(cols) + 40);
    const int height = static_cast<int>(oy + cell_h * static_cast<double>(rows) + 30);

    double min_nz = std::numeric_limits<double>::max(), max_nz = 0.0;
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            const double a = std::abs(m(i, j));
            if (a > 0.0) {
                min_nz = std::min(min_nz, a);
                max_nz = std::max(max_nz, a);
            }
        }

    std::ostringstream out;
    out << svg_open(width, height);
    out << "<text x='" << fmt(ox) << "' y='20' font-size='14' font-weight='bold'>"
        << escape(title) << "</text>\n";
    out << "<rect x='" << fmt(ox) << "' y='" << fmt(oy) << "' width='"
        << fmt(cell_w * static_cast<double>(cols)) << "' height='"
        << fmt(cell_h * static_cast<double>(rows))
        << "' fill='#ffffff' stroke='#333333' stroke-width='1'/>\n";

    if (max_nz > 0.0) {
        const double log_lo = std::log10(min_nz);
        const double log_hi = std::log10(max_nz);
        const double span = log_hi > log_lo ? log_hi - log_lo : 1.0;
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) {
                const double a = std::abs(m(i, j));
                if (a == 0.0) continue;  // zero weights stay white
                const double u = (std::log10(a) - log_lo) / span;
                // light to dark blue ramp
                const int r = static_cast<int>(222 - 214 * u);
                const int g = static_cast<int>(235 - 187 * u);
                const int b = static_cast<int>(247 - 140 * u);
                char color[8];
                std::snprintf(color, sizeof(color), "#%02x%02x%02x", r, g, b);
                out << "<rect x='" << fmt(ox + cell_w * static_cast<double>(j)) << "' y='"
                    << fmt(oy + cell_h * static_cast<double>(i)) << "' width='" << fmt(cell_w)
                    << "' height='" << fmt(cell_h) << "' fill='" << color << "'/>\n";
            }
        }
        out << "<text x='" << fmt(ox) << "' y='" << fmt(oy + cell_h * static_cast<double>(rows) + 18)
            << "' font-size='10'>|w| from " << fmt_tick(min_nz) << " (light) to " << fmt_tick(max_nz)
            << " (dark), zeros white</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string kde_panels(const std::vector<KdePanel>& panels, const std::string& title) {
    constexpr int width = 640;
    constexpr int panel_h = 130;
    const int height = 40 + panel_h * static_cast<int>(panels.size()) + 30;

    std::ostringstream out;
    out << svg_open(width, height);
    out << "<text x='" << width / 2 << "' y='22' font-size='14' text-anchor='middle' "
        << "font-weight='bold'>" << escape(title) << "</text>\n";

    for (size_t p = 0; p < panels.size(); ++p) {
        const auto& panel = panels[p];
        const double top = 40.0 + panel_h * static_cast<double>(p);
        double y_max = 0.0;
        for (const auto& curve : panel.dist.density_per_class)
            if (curve.size() > 0) y_max = std::max(y_max, curve.maxCoeff());
        if (y_max <= 0.0) y_max = 1.0;

        Frame f{0.0, 1.0, 0.0, 1.05 * y_max, 56, width - 90.0, top + 8, top + panel_h - 24.0};
        out << "<g class='panel'>\n";
        out << "<text x='" << fmt(f.px0) << "' y='" << fmt(top + 12) << "' font-size='12' "
            << "font-weight='bold'>" << escape(panel.name) << "</text>\n";
        out << "<rect x='" << fmt(f.px0) << "' y='" << fmt(f.py0) << "' width='"
            << fmt(f.px1 - f.px0) << "' height='" << fmt(f.py1 - f.py0)
            << "' fill='none' stroke='#333333'/>\n";
        for (int t = 0; t <= 4; ++t) {
            const double fx = 0.25 * t;
            out << "<text x='" << fmt(f.px(fx)) << "' y='" << fmt(f.py1 + 12)
                << "' font-size='9' text-anchor='middle'>" << fmt_tick(fx) << "</text>\n";
        }
        for (size_t c = 0; c < panel.dist.density_per_class.size(); ++c) {
            const Vector& curve = panel.dist.density_per_class[c];
            if (curve.size() == 0) continue;
            out << "<polyline fill='none' stroke='" << kPalette[c % kPaletteSize]
                << "' stroke-width='1.5' points='";
            for (Index g = 0; g < curve.size(); ++g)
                out << fmt(f.px(panel.dist.grid[g])) << "," << fmt(f.py(curve[g])) << " ";
            out << "'/>\n";
            const std::string label = panel.dist.flipped_class0 && c == 0
                                          ? "class 0 (flipped)"
                                          : "class " + std::to_string(c);
            out << "<text x='" << fmt(f.px1 + 6) << "' y='"
                << fmt(f.py0 + 12.0 * static_cast<double>(c) + 10) << "' font-size='9' fill='"
                << kPalette[c % kPaletteSize] << "'>" << escape(label) << "</text>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace ssae::svg
