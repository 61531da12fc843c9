#pragma once

namespace bicm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bicm
