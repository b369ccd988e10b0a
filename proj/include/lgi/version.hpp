#pragma once

namespace lgi {
inline constexpr const char* kVersion = "0.1.0";
}
