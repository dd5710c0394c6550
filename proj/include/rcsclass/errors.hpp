#pragma once

#include <stdexcept>
#include <string>

namespace rcs {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid user input: malformed files, out-of-range parameters, bad CLI
// arguments.  The CLI maps this to exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

// Malformed text input; carries the 1-based line number when known.
struct ParseError : ValidationError {
    ParseError(const std::string& msg, long line_no = 0)
        : ValidationError(line_no > 0 ? msg + " (line " + std::to_string(line_no) + ")" : msg),
          line(line_no) {}
    long line = 0;
};

// Numerical failure during computation.  The CLI maps this to exit code 3.
struct NumericError : Error {
    using Error::Error;
};

// An iterative estimator failed to converge.  `detail` describes the last
// iterate so callers can log or inspect it.
struct EstimationError : NumericError {
    EstimationError(const std::string& msg, std::string last_iterate = {})
        : NumericError(last_iterate.empty() ? msg : msg + " [last iterate: " + last_iterate + "]"),
          detail(std::move(last_iterate)) {}
    std::string detail;
};

}  // namespace rcs
