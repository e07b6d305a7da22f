#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ite {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// |f| fell below the relative threshold somewhere on a counting contour.
class ZeroOnBoundary : public Error {
public:
  ZeroOnBoundary(const std::string& what, std::complex<double> where)
      : Error(what), where_(where) {}
  std::complex<double> where() const { return where_; }

private:
  std::complex<double> where_;
};

class NonConvergent : public Error {
public:
  using Error::Error;
};

class OutOfRange : public Error {
public:
  using Error::Error;
};

class InvalidContrast : public Error {
public:
  using Error::Error;
};

class StiffFailure : public Error {
public:
  using Error::Error;
};

/// A characteristic root sits on (or numerically at) the real axis.
class DegenerateRoot : public Error {
public:
  using Error::Error;
};

class ScanFailed : public Error {
public:
  using Error::Error;
};

class BadDelta : public Error {
public:
  using Error::Error;
};

class BadRadius : public Error {
public:
  using Error::Error;
};

class CoverageGap : public Error {
public:
  CoverageGap(const std::string& what, std::complex<double> witness)
      : Error(what), witness_(witness) {}
  std::complex<double> witness() const { return witness_; }

private:
  std::complex<double> witness_;
};

class EmptyWindow : public Error {
public:
  using Error::Error;
};

class UncertifiedCutoff : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace ite
