#pragma once

namespace rlp {
inline constexpr const char* kVersion = "1.0.0";
}
