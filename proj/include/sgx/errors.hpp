#pragma once

#include <stdexcept>
#include <string>

namespace sgx {

// Bad user input (config files, out-of-range parameters).  CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A sampler or integrator produced non-finite values or ran out of
// statistical headroom.  CLI exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures and malformed on-disk data.  CLI exit code 4.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sgx
