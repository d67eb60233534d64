#pragma once

namespace superosc {
inline constexpr const char* kVersion = "0.1.0";
}
