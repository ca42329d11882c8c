#pragma once

#include <stdexcept>
#include <string>

namespace recipesim {

// Bad user-supplied data or arguments. The CLI maps this to exit code 1;
// anything else escaping a command is treated as an internal error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace recipesim
