#pragma once

namespace collapselab {

inline constexpr const char* version = "0.1.0";

}  // namespace collapselab
