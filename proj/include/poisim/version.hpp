#pragma once

namespace poisim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace poisim
