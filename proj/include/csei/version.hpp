#pragma once

namespace csei {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace csei
