#pragma once

namespace hopsim {

inline constexpr const char* kToolName = "hopsim";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace hopsim
