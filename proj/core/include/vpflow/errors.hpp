#ifndef VPFLOW_ERRORS_HPP
#define VPFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vpflow {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file (carries a line number in the message where known).
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input that violates a domain invariant.
struct ValidationError : Error {
    using Error::Error;
};

// A configured budget (states, paths, iterations) was exceeded.
struct ResourceError : Error {
    using Error::Error;
};

// The external solver failed, crashed or produced unparsable output.
struct SolverError : Error {
    using Error::Error;
};

// A solver answer failed exact re-verification, or two routes that must
// agree did not.
struct ConsistencyError : Error {
    using Error::Error;
};

}  // namespace vpflow

#endif
