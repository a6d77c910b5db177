#pragma once

namespace hsd {

inline constexpr const char* kEngineVersion = "1.0.0";

}  // namespace hsd
