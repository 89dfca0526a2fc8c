#pragma once

namespace circqft {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace circqft
