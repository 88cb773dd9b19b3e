#ifndef KCC_ERRORS_HPP
#define KCC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kcc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed inputs: negative probabilities, shape mismatches, bad config values.
struct ValidationError : Error {
  using Error::Error;
};

// Exact enumeration would exceed the configured cap.
struct SizeError : Error {
  using Error::Error;
};

// Conditioning on a zero-mass event, or a state outside the support.
struct SupportError : Error {
  using Error::Error;
};

// P(Y = y) = 0 for the requested label.
struct DegenerateLabelError : Error {
  using Error::Error;
};

// Iterative solver ran out of iterations.
struct ConvergenceError : Error {
  int iterations;
  ConvergenceError(const std::string& what, int iters) : Error(what), iterations(iters) {}
};

}  // namespace kcc

#endif
