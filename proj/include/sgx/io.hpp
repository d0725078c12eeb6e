#pragma once

#include <string>
#include <vector>

#include "sgx/extremes.hpp"
#include "sgx/field.hpp"

// On-disk formats.
//
// Field ("FLD1"): 4 ASCII magic bytes, u32 LE n, u32 LE flags (must be 0),
// then n^2 IEEE-754 float64 LE values in row-major site order.
//
// Points: JSON lines; a header object {"r":..., "epsilon":..., "m_eps":...}
// followed by one {"x":[fx,fy],"h":h} object per point.  Numbers carry 17
// significant digits so round-trips are bit-exact.

namespace sgx::io {

void write_field(const std::string& path, const Field& field);
Field read_field(const std::string& path);

void write_points(const std::string& path, const extremes::ExtremalProcessSample& sample);

struct PointsReadResult {
  extremes::ExtremalProcessSample sample;
  std::string warning;  // non-empty when the header m_eps disagrees with centering(eps)
};
PointsReadResult read_points(const std::string& path);

// FNV-1a 64 over a file's bytes (manifest checksums).
uint64_t file_checksum(const std::string& path);

std::string format_double(double v);  // %.17g

void write_text(const std::string& path, const std::string& text);

}  // namespace sgx::io
