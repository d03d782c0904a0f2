#pragma once

#include <cstdint>
#include <string>

namespace bhflow {

/// Full round-trip formatting for CSV cells ("%.17g").
std::string format_full(double v);

/// FNV-1a 64-bit content hash (integrity tag for the manifest, not crypto).
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace bhflow
