#pragma once

namespace lyapstep {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lyapstep
