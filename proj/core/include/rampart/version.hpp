#pragma once

namespace rampart {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rampart
