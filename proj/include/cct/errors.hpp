#pragma once

#include <stdexcept>
#include <string>

namespace cct {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MathError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SchemaVersionError : public Error {
 public:
  using Error::Error;
};

/// A failed structural check. `path` is a JSON pointer into the instance
/// when the data came from a file, otherwise a description of the indices;
/// `axiom` names the violated law.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, std::string axiom, const std::string& detail)
      : Error(path + ": " + axiom + ": " + detail), path_(std::move(path)), axiom_(std::move(axiom)) {}

  const std::string& path() const { return path_; }
  const std::string& axiom() const { return axiom_; }

 private:
  std::string path_;
  std::string axiom_;
};

class MissingDifferential : public Error {
 public:
  explicit MissingDifferential(int degree)
      : Error("missing differential in degree " + std::to_string(degree)), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class UnknownObject : public Error {
 public:
  using Error::Error;
};

class NotFibered : public Error {
 public:
  using Error::Error;
};

class NotAPoset : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  CapExceeded(int requested, int cap)
      : Error("nerve degree " + std::to_string(requested) + " exceeds cap " + std::to_string(cap)) {}
};

}  // namespace cct
