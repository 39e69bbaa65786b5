#pragma once

namespace ruzsa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ruzsa
