#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "paradom/field.hpp"

namespace paradom {

/// PCF1 field file: ASCII header `PCF1 d=<d> n=<n>` and a newline, then n^d
/// little-endian complex128 coefficients in FFT layout.
void write_pcf(const std::filesystem::path& path, const SpectralField& f);
SpectralField read_pcf(const std::filesystem::path& path);

using Meta = std::map<std::string, std::string>;

/// key=value lines.
void write_meta(const std::filesystem::path& path, const Meta& meta);
Meta read_meta(const std::filesystem::path& path);

/// Decimal with 17 significant digits (round-trips a double exactly).
std::string fmt17(double v);
double parse_double(const std::string& s, const std::string& what);
const std::string& meta_get(const Meta& m, const std::string& key);

}  // namespace paradom
