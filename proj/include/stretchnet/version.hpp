#pragma once

namespace stretchnet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stretchnet
