#pragma once

namespace weylspec {

inline constexpr const char* version_string = "0.1.0";
inline constexpr int csv_schema_version = 1;

} // namespace weylspec
