#pragma once

#include <cstdint>
#include <filesystem>

#include "survmult/cmapss.hpp"

namespace survmult {

// Deterministic run-to-failure telemetry generator with the canonical
// subset structure: unit counts of 100/260/100/260 for FD001..FD004,
// cycles starting at 1 with no gaps, constant op_set_3 and sensor_1 in
// FD001/FD003, and six operating regimes driving every channel in
// FD002/FD004. Early-window sensor levels carry a unit-health signal so
// reformulated features are predictive of the failure time.
//
// Identical (subset, seed) pairs synthesize identical telemetry.
RawTelemetry synthesize_cmapss(CmapssSubset subset, std::uint64_t seed);

// Writes dir/train_<subset>.txt and returns its path.
std::filesystem::path write_synthetic_cmapss(const std::filesystem::path& dir,
                                             CmapssSubset subset, std::uint64_t seed);

}  // namespace survmult
