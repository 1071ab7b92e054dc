#pragma once

#include <stdexcept>
#include <string>

namespace cotlab {

// precondition/range violations; the CLI maps these to exit code 3
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// working precision exhausted before a stopping rule; CLI exit code 4
class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cotlab
