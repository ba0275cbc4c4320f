#pragma once

namespace d1u {
inline constexpr const char *version = "0.1.0";
}
