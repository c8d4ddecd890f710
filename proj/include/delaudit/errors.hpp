#pragma once

#include <stdexcept>
#include <string>

namespace delaudit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A party broke the execution model (e.g. the subject sent Tick).
struct ModelViolationError : Error {
  using Error::Error;
};

// A party read past its finite tape budget, or a composed sub-controller
// read outside its declared tape region.
struct TapeBudgetError : Error {
  using Error::Error;
};
struct TapeSplitError : Error {
  using Error::Error;
};

// Exact-mode audit asked to enumerate a space larger than its cap.
struct EnumerationCapError : Error {
  using Error::Error;
};

// Rejection sampling ran out of attempts without preimage knowledge.
struct CappedSamplingError : Error {
  using Error::Error;
};

struct DegenerateParameterError : Error {
  using Error::Error;
};
struct ParameterError : Error {
  using Error::Error;
};

struct UnsupportedCanonicalizationError : Error {
  using Error::Error;
};

struct InvalidAdversaryError : Error {
  using Error::Error;
};

// A confidentiality fixture's subject messaged the environment.
struct SubjectClassError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ArithmeticOverflowError : Error {
  using Error::Error;
};

}  // namespace delaudit
