#pragma once

#include <stdexcept>
#include <string>

namespace oestylo {

// Raised by every analysis routine on bad input or a failed precondition.
// The CLI maps it to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oestylo
