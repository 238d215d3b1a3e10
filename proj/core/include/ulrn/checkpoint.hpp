// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>

#include "ulrn/params.hpp"

namespace ulrn {

// Checkpoint file layout, all integers little-endian:
//   magic "ULRN1\n"
//   per tensor, in parameter order:
//     u32 name length, name bytes,
//     u32 rank, u32 dims...,
//     f32 payload, row-major
//   u32 CRC32 (IEEE) of every prior byte
//
// Values are stored as f32; training stays f64, so a load loses the low
// mantissa bits but a save-load-save round trip is byte-identical.

void save_checkpoint(const std::filesystem::path& path, const ParameterSet& params);
ParameterSet load_checkpoint(const std::filesystem::path& path);

/// CRC32 (IEEE 802.3, reflected) over a byte range.
std::uint32_t crc32(const unsigned char* data, std::size_t len);

/// FNV-1a 64-bit hash, used to fingerprint canonicalized configs.
std::uint64_t fnv1a64(const std::string& bytes);

} // namespace ulrn
