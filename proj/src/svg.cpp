#include "sirdelay/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sirdelay {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

constexpr double kWidth = 800.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 130.0, kTop = 40.0, kBottom = 50.0;

// Roughly five ticks at 1, 2 or 5 times a power of ten.
std::vector<double> ticks(double lo, double hi) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return out;
}

}  // namespace

std::string svg_line_plot(const std::vector<double>& xs, const std::vector<Series>& series, const std::string& title,
                          const std::string& x_label) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (double x : xs)
    if (std::isfinite(x)) x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x);
  for (const Series& s : series)
    for (double v : s.values)
      if (std::isfinite(v)) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
  if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0;
  if (!std::isfinite(y_lo)) y_lo = 0.0, y_hi = 1.0;
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_lo -= 0.5, y_hi += 0.5;
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "  <text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{3}</text>\n",
      kWidth, kHeight, kLeft + pw / 2.0, xml_escape(title));

  out += fmt::format("  <g stroke=\"black\" stroke-width=\"1\">\n"
                     "    <line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>\n"
                     "    <line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\"/>\n  </g>\n",
                     kLeft, kTop + ph, kLeft + pw, kTop);
  out += "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : ticks(x_lo, x_hi))
    out += fmt::format("    <line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>"
                       "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4:g}</text>\n",
                       px(t), kTop + ph, kTop + ph + 5.0, kTop + ph + 18.0, t);
  for (double t : ticks(y_lo, y_hi))
    out += fmt::format("    <line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
                       "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:g}</text>\n",
                       kLeft - 5.0, py(t), kLeft, kLeft - 8.0, py(t) + 4.0, t);
  out += fmt::format("    <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n  </g>\n", kLeft + pw / 2.0,
                     kHeight - 10.0, xml_escape(x_label));

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const std::string color = s.color.empty() ? palette[k % 5] : s.color;
    std::string points;
    const std::size_t n = std::min(xs.size(), s.values.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(s.values[i])) continue;
      points += fmt::format("{:.2f},{:.2f} ", px(xs[i]), py(s.values[i]));
    }
    if (!points.empty()) points.pop_back();
    out += fmt::format("  <polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", xml_escape(color),
                       points);
    const double ly = kTop + 10.0 + 20.0 * static_cast<double>(k);
    out += fmt::format("  <line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>"
                       "<text x=\"{4}\" y=\"{5}\" font-family=\"sans-serif\" font-size=\"12\">{6}</text>\n",
                       kLeft + pw + 15.0, ly, kLeft + pw + 40.0, xml_escape(color), kLeft + pw + 45.0, ly + 4.0,
                       xml_escape(s.label));
  }
  out += "</svg>\n";
  return out;
}

std::string trajectory_svg(const Trajectory& traj, const std::string& title, double stride) {
  std::vector<double> ts;
  Series x{"x (susceptible)", {}, ""}, y{"y (infected)", {}, ""}, z{"z (recovered)", {}, ""};
  const double horizon = traj.horizon();
  const auto n = static_cast<std::size_t>(std::floor(horizon / stride + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = std::min(static_cast<double>(k) * stride, horizon);
    const State s = dense_eval(traj, t);
    ts.push_back(t);
    x.values.push_back(s.x);
    y.values.push_back(s.y);
    z.values.push_back(s.z);
  }
  return svg_line_plot(ts, {x, y, z}, title);
}

}  // namespace sirdelay
