#pragma once

#include <stdexcept>
#include <string>

namespace histslice {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad input from the user or the environment; the CLI maps these to exit 2.
class InputError : public Error {
public:
  using Error::Error;
};

class MalformedFixture : public InputError {
public:
  using InputError::InputError;
};

class NotARepository : public InputError {
public:
  using InputError::InputError;
};

class UnknownCommit : public InputError {
public:
  using InputError::InputError;
};

class NotLinearHistory : public InputError {
public:
  using InputError::InputError;
};

class EmptyRange : public InputError {
public:
  using InputError::InputError;
};

class UnknownCriterion : public InputError {
public:
  using InputError::InputError;
};

class MismatchedCriteria : public InputError {
public:
  using InputError::InputError;
};

class DiffOnUnparseable : public Error {
public:
  using Error::Error;
};

/// A patch in a materialized series did not apply; names the first element
/// whose pre-image was not found.
class PatchConflict : public Error {
public:
  PatchConflict(std::string commit, std::string file, const std::string &what)
      : Error(what), commit_(std::move(commit)), file_(std::move(file)) {}

  const std::string &commit() const noexcept { return commit_; }
  const std::string &file() const noexcept { return file_; }

private:
  std::string commit_;
  std::string file_;
};

class InvariantViolation : public Error {
public:
  using Error::Error;
};

} // namespace histslice
