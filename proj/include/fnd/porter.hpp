#ifndef FND_PORTER_HPP
#define FND_PORTER_HPP

#include <string>
#include <string_view>

namespace fnd {

// Classic Porter stemming algorithm (steps 1a through 5b, measure-based
// conditions), applied once. Input must be lowercase a-z.
std::string porter_stem(std::string_view word);

} // namespace fnd

#endif
