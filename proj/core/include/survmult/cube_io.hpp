#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "survmult/rashomon.hpp"

namespace survmult {

// Documented matrix file for prediction cubes, so externally trained model
// sets can feed the analyzer:
//
//   survmult-cube 1
//   # config=<hash>                      (optional comment lines)
//   models <m>
//   observations <n>
//   metric <kind> <lower|higher> horizon <h|none>
//   reference <index>
//   model <k> <performance> <c_index|nan> <id>    (m lines)
//   risks <k> <v_1> ... <v_n>                     (m lines, row-major)
//
// Numbers are written in shortest round-trip form.
void write_cube(std::ostream& out, const PredictionCube& cube,
                const std::string& config_hash = {});
void write_cube(const std::filesystem::path& path, const PredictionCube& cube,
                const std::string& config_hash = {});

// Throws ParseError on malformed input; the loaded cube is validated.
PredictionCube read_cube(std::istream& in);
PredictionCube read_cube(const std::filesystem::path& path);

}  // namespace survmult
