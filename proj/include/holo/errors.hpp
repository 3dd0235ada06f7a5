#pragma once

#include <stdexcept>
#include <string>

namespace holo {

// Invalid configuration, bad file, bad shape. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric failure at run time (divergence, non-finite values). CLI exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace holo
