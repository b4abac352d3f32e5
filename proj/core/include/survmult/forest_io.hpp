#pragma once

#include <filesystem>
#include <iosfwd>

#include "survmult/forest.hpp"

namespace survmult {

// Versioned text persistence for trained forests. Doubles are written in
// shortest round-trip form, so a loaded forest reproduces the original's
// predictions bit-for-bit.
void save_forest(std::ostream& out, const SurvivalForest& forest);
void save_forest(const std::filesystem::path& path, const SurvivalForest& forest);

// Throws ParseError on malformed or wrong-version input.
SurvivalForest load_forest(std::istream& in);
SurvivalForest load_forest(const std::filesystem::path& path);

}  // namespace survmult
