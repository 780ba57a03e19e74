#pragma once

namespace firmbreak {
inline constexpr const char* kVersion = "1.0.0";
}
