#pragma once

namespace polyloc {
inline constexpr const char* kVersion = "0.1.0";
}
