#pragma once

namespace icb {

inline constexpr const char* kVersionString = "icbench 1.0.0";

}  // namespace icb
