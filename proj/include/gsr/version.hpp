#pragma once

namespace gsr {
inline constexpr const char* kVersion = "0.1.0";
}
