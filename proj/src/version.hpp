#pragma once

namespace irsa {

inline constexpr const char* kVersion = "0.1.0";

} // namespace irsa
