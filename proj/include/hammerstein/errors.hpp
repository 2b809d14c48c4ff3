#pragma once

#include <stdexcept>
#include <string>

namespace hammerstein {

// Every library failure derives from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* code() const noexcept { return "error"; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "invalid_argument"; }
};

class InvalidHyperparameter : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "invalid_hyperparameter"; }
};

// The reshaped vector is not rank one within tolerance.
class NotKopVector : public Error {
 public:
  NotKopVector(const std::string& what, double ratio) : Error(what), ratio_(ratio) {}
  const char* code() const noexcept override { return "not_kop_vector"; }
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

class IllPosed : public Error {
 public:
  IllPosed(const std::string& what, double condition) : Error(what), condition_(condition) {}
  const char* code() const noexcept override { return "ill_posed"; }
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "numerical_error"; }
};

class UndefinedFit : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "undefined_fit"; }
};

class InvalidStart : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "invalid_start"; }
};

class InternalConsistency : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "internal_consistency"; }
};

}  // namespace hammerstein
