#pragma once

#include <filesystem>

#include "klgof/point_set.hpp"

namespace klgof {

// Reads an N x m sample from a comma-separated file: rows are observations,
// columns are coordinates, decimal points, UTF-8. A single non-numeric
// first row is treated as a header. Throws BadInputError on empty input,
// non-numeric cells or ragged rows.
PointSet read_csv_points(const std::filesystem::path& path);

// Writes a sample with 17 significant digits so a read-back reproduces
// every value bit-for-bit.
void write_csv_points(const PointSet& points, const std::filesystem::path& path);

}  // namespace klgof
