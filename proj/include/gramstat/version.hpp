#pragma once

namespace gramstat {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gramstat
