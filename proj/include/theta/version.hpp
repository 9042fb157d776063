#pragma once

namespace theta {

inline constexpr const char* kVersion = "0.1.0";

// Report documents carry this schema tag.
inline constexpr const char* kSchema = "theta-atlas/1";

} // namespace theta
