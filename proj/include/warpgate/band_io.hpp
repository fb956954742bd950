#pragma once

#include <filesystem>
#include <string>

#include "warpgate/band_learning.hpp"
#include "warpgate/series.hpp"

namespace warpgate {

// Band file: {"length": N, "radii": [r1, ..., rN]}.
std::string band_to_json(const BandConstraint& band);
BandConstraint band_from_json(const std::string& text);
void write_band(const std::filesystem::path& path, const BandConstraint& band);
BandConstraint read_band(const std::filesystem::path& path);

/// Per-class bands as one object keyed by label, each value a band file body.
std::string class_bands_to_json(const ClassBands& bands);

}  // namespace warpgate
