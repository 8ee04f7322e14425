#pragma once

#include <stdexcept>
#include <string>

namespace pejor {

// Base of every error the toolkit throws on bad input or violated contracts.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file contents (bad JSON line, wrong TSV column count, ...).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed data that breaks a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnknownWordError : public Error {
 public:
  using Error::Error;
};

// Missing assignments, predictions or embeddings for items that need them.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// Inputs for which a statistic is undefined (zero marginals, one annotator).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class IntegrityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pejor
