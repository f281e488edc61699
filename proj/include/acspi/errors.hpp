#pragma once

#include <stdexcept>
#include <string>

namespace acspi {

// Raised when a run detects it can no longer be trusted (norm collapse,
// non-real expectation residue).  Mapped to exit code 3 by the CLI.
struct numerical_abort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised for invalid or inconsistent run configuration.  Exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace acspi
