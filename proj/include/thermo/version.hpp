#pragma once

namespace thermo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace thermo
