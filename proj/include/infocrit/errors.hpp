#ifndef INFOCRIT_ERRORS_HPP
#define INFOCRIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace infocrit {

/// Malformed input file or table (bad CSV shape, unparsable cell, header mismatch).
class InputFormatError : public std::runtime_error {
 public:
  InputFormatError(const std::string& what, std::size_t row, std::size_t col)
      : std::runtime_error(what + " (row " + std::to_string(row) + ", column " +
                           std::to_string(col) + ")"),
        row_(row),
        col_(col) {}
  explicit InputFormatError(const std::string& what)
      : std::runtime_error(what), row_(0), col_(0) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

/// A value that must be finite was NaN or infinite.
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The model cannot produce the requested prediction (e.g. a held-out group
/// under no pooling).
class ModelRefusal : public std::runtime_error {
 public:
  ModelRefusal() : std::runtime_error("model cannot predict held-out point") {}
  explicit ModelRefusal(const std::string& detail)
      : std::runtime_error("model cannot predict held-out point: " + detail) {}
};

}  // namespace infocrit

#endif  // INFOCRIT_ERRORS_HPP
