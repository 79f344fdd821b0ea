#pragma once

namespace tailclass {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tailclass
