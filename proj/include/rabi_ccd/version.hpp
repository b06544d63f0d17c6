#pragma once

namespace rabi_ccd {

inline constexpr const char* kVersion = "rabi-ccd 1.0.0";

}  // namespace rabi_ccd
