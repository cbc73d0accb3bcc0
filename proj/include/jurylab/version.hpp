#pragma once

namespace jurylab {
inline constexpr const char* kVersion = "0.1.0";
}
