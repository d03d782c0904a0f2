#pragma once

namespace bhflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bhflow
