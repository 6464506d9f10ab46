#pragma once

namespace gyrofp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gyrofp
