#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hgembed {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument (shape, range, binary-ness) does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The graph handed to a spectral routine has more than one connected component.
class DisconnectedGraph : public Error {
 public:
  DisconnectedGraph(const std::string& what, std::size_t zero_multiplicity)
      : Error(what), zero_multiplicity_(zero_multiplicity) {}

  std::size_t zero_multiplicity() const noexcept { return zero_multiplicity_; }

 private:
  std::size_t zero_multiplicity_;
};

// Repeated eigenvalues make the eigenvector derivative undefined.
class DegenerateSpectrum : public Error {
 public:
  DegenerateSpectrum(const std::string& what, double min_gap) : Error(what), min_gap_(min_gap) {}

  double min_gap() const noexcept { return min_gap_; }

 private:
  double min_gap_;
};

class EigenSolverError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column = 0)
      : Error("line " + std::to_string(line) + (column ? ", column " + std::to_string(column) : std::string{}) +
              ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace hgembed
