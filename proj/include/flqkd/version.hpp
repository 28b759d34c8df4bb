#pragma once

namespace flqkd {
inline constexpr const char* kVersion = "0.1.0";
}
