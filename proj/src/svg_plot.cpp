#include "smes/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace smes {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0, kRight = 24.0, kTop = 36.0, kBottom = 64.0;

std::string fmt(double v) {
  char buf[32];
  int n = std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

struct Mapper {
  double x_min, x_max, y_min, y_max;
  double map_x(double x) const {
    return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
  }
  double map_y(double y) const {
    return kTop + (1.0 - (y - y_min) / (y_max - y_min)) * (kHeight - kTop - kBottom);
  }
};

std::vector<double> nice_ticks(double lo, double hi, int target) {
  double span = hi - lo;
  double raw = span / std::max(1, target);
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> ticks;
  double first = std::ceil(lo / step) * step;
  for (double t = first; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(std::round(t * 1e9) / 1e9);
  }
  return ticks;
}

}  // namespace

void write_alpha_error_chart(const SweepSummary& summary, const std::filesystem::path& svg_path,
                             const std::filesystem::path& csv_path) {
  std::vector<SummaryRow> rows;
  for (const SummaryRow& r : summary.rows) {
    if (r.mean_test_err) rows.push_back(r);
  }
  if (rows.empty()) throw std::invalid_argument("plot: no completed runs to plot");

  double x_min = rows.front().alpha, x_max = rows.back().alpha;
  if (x_min == x_max) {
    x_min -= 0.02;
    x_max += 0.02;
  }
  double y_min = 1e300, y_max = -1e300;
  for (const SummaryRow& r : rows) {
    y_min = std::min(y_min, *r.mean_test_err - r.std_test_err);
    y_max = std::max(y_max, *r.mean_test_err + r.std_test_err);
  }
  if (y_min == y_max) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  double pad = 0.08 * (y_max - y_min);
  Mapper m{x_min, x_max, y_min - pad, y_max + pad};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "  <text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"15\">mean final test error vs balance coefficient</text>\n";

  // frame and grid
  svg << "  <rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
      << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  svg << "  <g font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">\n";
  std::size_t stride = rows.size() > 13 ? (rows.size() + 12) / 13 : 1;
  for (std::size_t i = 0; i < rows.size(); i += stride) {
    double x = m.map_x(rows[i].alpha);
    svg << "    <line x1=\"" << fmt(x) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << kHeight - kBottom + 6 << "\" stroke=\"#444\"/>\n";
    svg << "    <text class=\"xtick\" x=\"" << fmt(x) << "\" y=\"" << kHeight - kBottom + 22
        << "\" text-anchor=\"middle\">" << format_double(rows[i].alpha) << "</text>\n";
  }
  for (double t : nice_ticks(m.y_min, m.y_max, 6)) {
    double y = m.map_y(t);
    svg << "    <line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\"" << kWidth - kRight
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#ddd\" stroke-dasharray=\"4,3\"/>\n";
    svg << "    <text class=\"ytick\" x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  svg << "    <text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\">balance coefficient alpha</text>\n";
  svg << "    <text x=\"22\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 22 " << (kTop + kHeight - kBottom) / 2
      << ")\">test error %</text>\n";
  svg << "  </g>\n";

  // std band
  bool any_std = std::any_of(rows.begin(), rows.end(),
                             [](const SummaryRow& r) { return r.std_test_err > 0.0; });
  if (any_std && rows.size() > 1) {
    svg << "  <polygon class=\"band\" fill=\"#aec7e8\" fill-opacity=\"0.45\" stroke=\"none\" points=\"";
    for (const SummaryRow& r : rows) {
      svg << fmt(m.map_x(r.alpha)) << ',' << fmt(m.map_y(*r.mean_test_err + r.std_test_err)) << ' ';
    }
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      svg << fmt(m.map_x(it->alpha)) << ',' << fmt(m.map_y(*it->mean_test_err - it->std_test_err))
          << ' ';
    }
    svg << "\"/>\n";
  }

  // mean line and markers
  if (rows.size() > 1) {
    svg << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const SummaryRow& r : rows) {
      svg << fmt(m.map_x(r.alpha)) << ',' << fmt(m.map_y(*r.mean_test_err)) << ' ';
    }
    svg << "\"/>\n";
  }
  for (const SummaryRow& r : rows) {
    svg << "  <circle class=\"pt\" cx=\"" << fmt(m.map_x(r.alpha)) << "\" cy=\""
        << fmt(m.map_y(*r.mean_test_err)) << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(svg_path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + svg_path.string() + "' for writing");
  out << svg.str();
  if (!out) throw std::runtime_error("write failed for '" + svg_path.string() + "'");

  write_summary_csv(summary, csv_path);
}

}  // namespace smes
