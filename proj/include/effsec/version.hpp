#pragma once

namespace effsec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace effsec
