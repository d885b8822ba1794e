#pragma once

// Field snapshot CSV:
//   # t=<time> h=<h> n=<nx>[,<ny>]
//   [# further comment lines]
//   x[,y],value          one line per node, x fastest
// Numbers are printed with 17 significant digits so a write/read cycle is exact.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nle/grid.hpp"

namespace nle {

struct FieldSnapshot {
    double time = 0.0;
    ScalarField field;
};

/// Shortest-exact 17 significant digit representation.
std::string format_double(double v);

void write_field_csv(std::ostream& os, const ScalarField& field, double time,
                     const std::vector<std::string>& extra_comments = {});
void write_field_csv(const std::filesystem::path& path, const ScalarField& field, double time,
                     const std::vector<std::string>& extra_comments = {});

FieldSnapshot read_field_csv(std::istream& is);
FieldSnapshot read_field_csv(const std::filesystem::path& path);

}  // namespace nle
