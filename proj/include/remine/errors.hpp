#pragma once

#include <stdexcept>
#include <string>

namespace remine {

// Error taxonomy shared by the library and the CLI. The CLI maps these to
// exit codes: io_error -> 2, schema_error -> 3, all other subclasses -> 4.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing or unreadable input files / streams.
struct io_error : error {
  using error::error;
};

// An intermediate file declares a schema name/version this build cannot read.
struct schema_error : error {
  using error::error;
};

// Malformed file contents: bad JSON lines, CSV violations, dimension
// mismatches, unresolved references. Messages carry line detail.
struct validation_error : error {
  using error::error;
};

// A caller passed an out-of-domain parameter (inverted bounds, bad fraction).
struct argument_error : error {
  using error::error;
};

}  // namespace remine
