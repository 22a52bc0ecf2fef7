#pragma once

#include "ssae/metrics.hpp"
#include "ssae/types.hpp"

#include <string>
#include <vector>

namespace ssae::svg {

struct Series {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
};

struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    int cls = 0;
};

/// One polyline per series with markers, axes, ticks and a legend.
std::string line_plot(const std::vector<Series>& series, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel);

/// Class-colored scatter with axes and a legend of class names.
std::string scatter(const std::vector<ScatterPoint>& points,
                    const std::vector<std::string>& class_names, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel);

/// |value| on a logarithmic color scale; exact zeros stay white (only
/// nonzero cells emit a rect over the white background).
std::string heatmap_log(const Matrix& m, const std::string& title);

struct KdePanel {
    std::string name;
    ScoreDistribution dist;
};

/// Vertically stacked density panels, one per method, shared [0,1] axis.
/// Each panel is a <g class="panel"> group.
std::string kde_panels(const std::vector<KdePanel>& panels, const std::string& title);

}  // namespace ssae::svg
