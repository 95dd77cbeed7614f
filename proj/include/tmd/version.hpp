#pragma once

#define TMD_SIM_VERSION "0.1.0"

namespace tmd {

inline constexpr const char* version() { return TMD_SIM_VERSION; }

} // namespace tmd
