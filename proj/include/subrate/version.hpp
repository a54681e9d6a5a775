#pragma once

namespace subrate {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchemaVersion = 1;

}  // namespace subrate
