#pragma once

namespace ragcritic {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ragcritic
