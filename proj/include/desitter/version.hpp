#pragma once

namespace desitter {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace desitter
