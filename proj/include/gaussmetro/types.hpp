#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gaussmetro {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input configuration; carries the offending field path.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Unphysical state, parameter or derivative (invalid transmissivity, singular
// covariance, inconsistent SLD system, blind detector, zero information).
class PhysicsError : public Error {
 public:
  using Error::Error;
};

// Fock-space truncation gate rejected a state.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace gaussmetro
