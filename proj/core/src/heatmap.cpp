#include "survmult/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "text_util.hpp"

namespace survmult {

Rgb heatmap_color(double value) {
  const double v = std::clamp(value, 0.0, 1.0);
  // Linear ramp from near-white to a dark blue.
  const Rgb light{247, 251, 255};
  const Rgb dark{8, 48, 107};
  auto lerp = [v](std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>(
        std::lround(static_cast<double>(a) + v * (static_cast<double>(b) - a)));
  };
  return {lerp(light.r, dark.r), lerp(light.g, dark.g), lerp(light.b, dark.b)};
}

double luminance(Rgb color) {
  return 0.2126 * color.r + 0.7152 * color.g + 0.0722 * color.b;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string hex_color(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

}  // namespace

void write_heatmap_svg(const std::filesystem::path& path, const std::string& title,
                       std::span<const double> eps_grid,
                       std::span<const double> delta_grid,
                       std::span<const double> values,
                       const std::string& config_hash) {
  if (eps_grid.empty() || delta_grid.empty()) {
    throw std::domain_error("write_heatmap_svg: grids must be non-empty");
  }
  if (values.size() != eps_grid.size() * delta_grid.size()) {
    throw std::domain_error("write_heatmap_svg: one value per grid cell required");
  }

  constexpr double kCell = 64.0;
  constexpr double kLeft = 86.0;
  constexpr double kTop = 56.0;
  constexpr double kLegend = 110.0;
  const double grid_w = kCell * static_cast<double>(delta_grid.size());
  const double grid_h = kCell * static_cast<double>(eps_grid.size());
  const double width = kLeft + grid_w + kLegend;
  const double height = kTop + grid_h + 54.0;

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!config_hash.empty()) {
    out << "<!-- config=" << config_hash << " -->\n";
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0)
      << "\" height=\"" << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0)
      << ' ' << fixed(height, 0) << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <text x=\"" << fixed(kLeft, 0)
      << "\" y=\"26\" font-family=\"monospace\" font-size=\"16\">" << title
      << "</text>\n";

  // Rows: epsilon ascending top to bottom. Columns: delta ascending left to right.
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    for (std::size_t d = 0; d < delta_grid.size(); ++d) {
      const double v = values[e * delta_grid.size() + d];
      const Rgb color = heatmap_color(v);
      const double x = kLeft + kCell * static_cast<double>(d);
      const double y = kTop + kCell * static_cast<double>(e);
      out << "  <rect x=\"" << fixed(x, 1) << "\" y=\"" << fixed(y, 1) << "\" width=\""
          << fixed(kCell, 1) << "\" height=\"" << fixed(kCell, 1) << "\" fill=\""
          << hex_color(color) << "\" stroke=\"#666\" stroke-width=\"0.5\"/>\n";
      const bool dark_cell = luminance(color) < 140.0;
      out << "  <text x=\"" << fixed(x + kCell / 2.0, 1) << "\" y=\""
          << fixed(y + kCell / 2.0 + 4.0, 1)
          << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\" fill=\""
          << (dark_cell ? "white" : "black") << "\">" << fixed(v, 3) << "</text>\n";
    }
  }

  for (std::size_t d = 0; d < delta_grid.size(); ++d) {
    out << "  <text x=\"" << fixed(kLeft + kCell * (static_cast<double>(d) + 0.5), 1)
        << "\" y=\"" << fixed(kTop + grid_h + 18.0, 1)
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">"
        << detail::format_double(delta_grid[d]) << "</text>\n";
  }
  out << "  <text x=\"" << fixed(kLeft + grid_w / 2.0, 1) << "\" y=\""
      << fixed(kTop + grid_h + 40.0, 1)
      << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">delta</text>\n";

  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    out << "  <text x=\"" << fixed(kLeft - 8.0, 1) << "\" y=\""
        << fixed(kTop + kCell * (static_cast<double>(e) + 0.5) + 4.0, 1)
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
        << detail::format_double(eps_grid[e]) << "</text>\n";
  }
  out << "  <text x=\"14\" y=\"" << fixed(kTop + grid_h / 2.0, 1)
      << "\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 14 "
      << fixed(kTop + grid_h / 2.0, 1) << ")\" text-anchor=\"middle\">epsilon</text>\n";

  // Legend: [0, 1] ramp in ten steps.
  const double lx = kLeft + grid_w + 28.0;
  for (int s = 0; s < 10; ++s) {
    const double v0 = 1.0 - (static_cast<double>(s) + 0.5) / 10.0;
    const double y = kTop + grid_h * static_cast<double>(s) / 10.0;
    out << "  <rect x=\"" << fixed(lx, 1) << "\" y=\"" << fixed(y, 1)
        << "\" width=\"18\" height=\"" << fixed(grid_h / 10.0, 2) << "\" fill=\""
        << hex_color(heatmap_color(v0)) << "\"/>\n";
  }
  out << "  <text x=\"" << fixed(lx + 24.0, 1) << "\" y=\"" << fixed(kTop + 10.0, 1)
      << "\" font-family=\"monospace\" font-size=\"11\">1.0</text>\n";
  out << "  <text x=\"" << fixed(lx + 24.0, 1) << "\" y=\"" << fixed(kTop + grid_h, 1)
      << "\" font-family=\"monospace\" font-size=\"11\">0.0</text>\n";
  out << "</svg>\n";
}

}  // namespace survmult
