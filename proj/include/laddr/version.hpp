#pragma once

namespace laddr {

inline constexpr const char* kVersion = "0.1.0";

} // namespace laddr
