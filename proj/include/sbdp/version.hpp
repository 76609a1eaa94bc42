#pragma once

namespace sbdp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sbdp
