#pragma once

#include <stdexcept>
#include <string>

namespace fraclat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class SignChangeError : public Error {
 public:
  using Error::Error;
};

class UnderflowError : public Error {
 public:
  using Error::Error;
};

class IntegerOrderBoundaryError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Non-finite values appeared while stepping. step() is the index of the
// first step whose result was bad (0-based within the run that raised it).
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, long step)
      : Error(what + " (step " + std::to_string(step) + ")"), what_(what), step_(step) {}
  long step() const { return step_; }
  const std::string& reason() const { return what_; }

 private:
  std::string what_;
  long step_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, int line = 0, std::string field = {})
      : Error(format(msg, line, field)), line_(line), field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(const std::string& msg, int line, const std::string& field) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + msg;
  }
  int line_;
  std::string field_;
};

}  // namespace fraclat
