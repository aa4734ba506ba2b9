#pragma once

namespace knesermix {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace knesermix
