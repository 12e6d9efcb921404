#ifndef FND_VERSION_HPP
#define FND_VERSION_HPP

namespace fnd {

inline constexpr const char* kVersion = "fndbench 0.1.0";

} // namespace fnd

#endif
