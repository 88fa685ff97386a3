#pragma once

#define SMM_VERSION_MAJOR 0
#define SMM_VERSION_MINOR 1
#define SMM_VERSION_PATCH 0

namespace smm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace smm
