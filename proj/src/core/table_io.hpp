#pragma once

#include <string>
#include <string_view>

#include "spectrum.hpp"

namespace totmom {

inline constexpr int kTableFormatVersion = 1;

// Versioned JSON document: integer Q coordinates, energies as shortest
// round-trip decimals, cutoff, tail bound and the units block.
std::string spectral_table_to_json(const SpectralTable& table);
SpectralTable spectral_table_from_json(std::string_view text);

}  // namespace totmom
