#pragma once

#include <filesystem>
#include <iosfwd>

#include "bvq/field.hpp"

namespace bvq {

enum class Encoding { binary_le, csv };

// Text header followed by a payload of 64-bit floats, row-major (last axis
// fastest), vector components interleaved. Binary payloads are little-endian
// and followed by one byte per cell when a mask is present; CSV payloads have
// one line per cell with the mask flag as a trailing column.
void write_field(std::ostream& os, const Field& u, Encoding enc = Encoding::binary_le);
void write_field(const std::filesystem::path& path, const Field& u, Encoding enc = Encoding::binary_le);

Field read_field(std::istream& is);
Field read_field(const std::filesystem::path& path);

}  // namespace bvq
