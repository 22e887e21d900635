#pragma once

#include <stdexcept>
#include <string>

namespace cfsim {

// Base for everything the library throws on bad input.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class LookupError : public Error {
public:
  using Error::Error;
};

// Operation needs a sensor/actuator the drone was not configured with.
class CapabilityError : public Error {
public:
  using Error::Error;
};

class PayloadError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class FitError : public Error {
public:
  using Error::Error;
};

// Invariant violation in a configuration; message starts with the field path.
class ValidationError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class MetricsError : public Error {
public:
  using Error::Error;
};

// Scenario/CSV text that does not parse. line() is 1-based, 0 when unknown.
class ParseError : public Error {
public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  int line() const { return line_; }

private:
  int line_;
};

}  // namespace cfsim
