#pragma once

#include <string>
#include <vector>

#include "sirdelay/integrator.hpp"

namespace sirdelay {

struct Series {
  std::string label;
  std::vector<double> values;
  std::string color;
};

/// Self-contained SVG line chart: axes with tick labels, one polyline per series,
/// legend. All series share `xs`. Text is XML-escaped.
std::string svg_line_plot(const std::vector<double>& xs, const std::vector<Series>& series, const std::string& title,
                          const std::string& x_label = "t");

/// x, y and z against time, sampled every `stride`.
std::string trajectory_svg(const Trajectory& traj, const std::string& title, double stride = 0.1);

std::string xml_escape(const std::string& s);

}  // namespace sirdelay
