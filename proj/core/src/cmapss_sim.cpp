#include "survmult/cmapss_sim.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "survmult/rng.hpp"

namespace survmult {

namespace {

struct SubsetShape {
  std::size_t units;
  double min_life;
  double max_life;
  double life_shape;   // exponent on the uniform draw; larger = shorter lives
  bool multi_regime;   // six operating regimes (FD002/FD004)
  bool constant_cols;  // op_set_3 and sensor_1 held constant (FD001/FD003)
};

SubsetShape shape_for(CmapssSubset subset) {
  switch (subset) {
    case CmapssSubset::kFD001:
      return {100, 150.0, 362.0, 1.3, false, true};
    case CmapssSubset::kFD002:
      return {260, 128.0, 378.0, 1.4, true, false};
    case CmapssSubset::kFD003:
      return {100, 145.0, 525.0, 2.2, false, true};
    case CmapssSubset::kFD004:
      return {260, 128.0, 378.0, 1.4, true, false};
  }
  return {100, 150.0, 362.0, 1.3, false, true};
}

// Typical channel magnitudes; index 0 is sensor_1.
constexpr std::array<double, kCmapssSensors> kSensorAnchors = {
    518.67, 642.5,  1589.7, 1400.6, 14.62, 21.61, 554.4,
    2388.1, 9046.2, 1.3,    47.47,  521.7, 2388.1, 8138.6,
    8.4195, 0.03,   392.0,  2388.0, 100.0, 38.86,  23.29};

struct Regime {
  double op1;
  double op2;
  double op3;
  double sensor_scale;
};

constexpr std::array<Regime, 6> kRegimes = {{{0.0, 0.0, 100.0, 1.00},
                                             {10.0, 0.25, 100.0, 0.99},
                                             {20.0, 0.70, 100.0, 1.01},
                                             {25.0, 0.62, 60.0, 0.98},
                                             {35.0, 0.84, 100.0, 1.02},
                                             {42.0, 0.84, 100.0, 0.97}}};

double quantize(double v, double step) { return std::round(v / step) * step; }

double gaussian(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t subset_tag(CmapssSubset subset) {
  return 0xC3A955ULL * 4 + static_cast<std::uint64_t>(subset);
}

}  // namespace

RawTelemetry synthesize_cmapss(CmapssSubset subset, std::uint64_t seed) {
  const SubsetShape shape = shape_for(subset);
  RawTelemetry raw;
  raw.subset = subset;

  for (std::size_t unit = 1; unit <= shape.units; ++unit) {
    Rng rng = Rng::stream(mix_seed(seed, subset_tag(subset)), unit);

    const double span = shape.max_life - shape.min_life;
    const double life_draw = std::pow(rng.uniform01(), shape.life_shape);
    const std::uint32_t life = static_cast<std::uint32_t>(
        shape.min_life + std::floor(span * life_draw));
    const double health = (static_cast<double>(life) - shape.min_life) / span;

    // Per-unit sensor offsets: a health-linked component that makes the
    // early-window features informative, plus idiosyncratic level noise.
    std::array<double, kCmapssSensors> offsets{};
    std::array<double, kCmapssSensors> amps{};
    for (std::size_t s = 0; s < kCmapssSensors; ++s) {
      amps[s] = std::max(0.004 * std::fabs(kSensorAnchors[s]), 0.05);
      const double direction = s % 2 == 0 ? 1.0 : -1.0;
      offsets[s] = direction * amps[s] * (health - 0.5) + 0.2 * amps[s] * gaussian(rng);
    }

    for (std::uint32_t cycle = 1; cycle <= life; ++cycle) {
      CmapssRecord rec;
      rec.unit = static_cast<std::uint32_t>(unit);
      rec.cycle = cycle;

      double sensor_scale = 1.0;
      if (shape.multi_regime) {
        const Regime& regime = kRegimes[rng.below(kRegimes.size())];
        rec.op_settings[0] = quantize(regime.op1 + rng.uniform(-0.2, 0.2), 1e-4);
        rec.op_settings[1] = quantize(regime.op2 + rng.uniform(-0.005, 0.005), 1e-4);
        rec.op_settings[2] = regime.op3;
        sensor_scale = regime.sensor_scale;
      } else {
        rec.op_settings[0] = quantize(rng.uniform(-0.0087, 0.0087), 1e-4);
        rec.op_settings[1] = quantize(rng.uniform(-0.0006, 0.0006), 1e-4);
        rec.op_settings[2] = 100.0;
      }

      const double wear = std::pow(static_cast<double>(cycle) / static_cast<double>(life), 1.5);
      for (std::size_t s = 0; s < kCmapssSensors; ++s) {
        if (shape.constant_cols && s == 0) {
          rec.sensors[s] = kSensorAnchors[s];  // sensor_1 constant in FD001/FD003
          continue;
        }
        const double direction = s % 2 == 0 ? 1.0 : -1.0;
        const double value = kSensorAnchors[s] * sensor_scale + offsets[s] +
                             direction * 2.0 * amps[s] * wear +
                             0.25 * amps[s] * gaussian(rng);
        rec.sensors[s] = quantize(value, 1e-4);
      }
      raw.records.push_back(rec);
    }
  }
  return raw;
}

std::filesystem::path write_synthetic_cmapss(const std::filesystem::path& dir,
                                             CmapssSubset subset, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  const auto path = dir / ("train_" + to_string(subset) + ".txt");
  write_cmapss(path, synthesize_cmapss(subset, seed));
  return path;
}

}  // namespace survmult
