#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace survmult {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

// Color for a metric value on [0, 1] (values clamped): a light-to-dark blue
// ramp whose luminance is strictly decreasing in the value.
Rgb heatmap_color(double value);

// Perceived luminance in [0, 255]; exposed so the shading monotonicity is
// testable.
double luminance(Rgb color);

// Standalone SVG heatmap over an (epsilon, delta) grid: delta on the x axis,
// epsilon on the y axis, one value per cell in row-major epsilon-major
// order, color scale fixed to [0, 1]. Deterministic output bytes.
void write_heatmap_svg(const std::filesystem::path& path, const std::string& title,
                       std::span<const double> eps_grid,
                       std::span<const double> delta_grid,
                       std::span<const double> values,
                       const std::string& config_hash = {});

}  // namespace survmult
