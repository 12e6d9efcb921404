#ifndef FND_ERRORS_HPP
#define FND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fnd {

// Bad CLI flags, malformed config files, unknown keys, invalid parameter
// combinations. CLI exit code 1.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or structurally broken input data. CLI exit code 2.
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical verification failure (gradient checks). CLI exit code 3.
class verify_error : public std::runtime_error {
public:
    explicit verify_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fnd

#endif
