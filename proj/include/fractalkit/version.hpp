#pragma once

namespace fractalkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fractalkit
