#ifndef ARCLP_ERRORS_HPP
#define ARCLP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace arclp {

// Lexical or structural problem in an input file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Semantically invalid model (undeclared row, crossed bounds, ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Infeasibility detected during preprocessing (contradictory rows).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem collapsed to nothing after preprocessing.
class DegenerateProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NaN/Inf breakdown or a failed factorization.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace arclp

#endif
