#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "fracdd/operators.hpp"

namespace fracdd {

inline constexpr std::uint32_t kSymbolFormatVersion = 1;

/// Binary symbol cache, all fields little-endian:
///   "FSYM" | u32 version | u32 n | u32 direction count | f64 alpha | f64 c
///   | (f64 theta, f64 weight) per direction
///   | (i32 di, i32 dj, f64 value) per nonzero symbol entry, to end of file.
void write_symbol(std::ostream& out, const FractionalOperator& op);
FractionalOperator read_symbol(std::istream& in);

void save_symbol(const std::filesystem::path& path, const FractionalOperator& op);
FractionalOperator load_symbol(const std::filesystem::path& path);

} // namespace fracdd
