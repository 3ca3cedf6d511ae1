#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracebound {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sequence or matrix too small for the requested bound (typically n < 2).
class DegenerateSizeError : public Error {
public:
    using Error::Error;
};

/// Index or rank argument outside its documented range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Input violates an ordering or structural precondition (unsorted data, non-unit direction).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Scalar parameter outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A bound was requested under a hypothesis the input does not satisfy
/// (normal formula on a non-normal matrix, extremal bounds without a real spectrum).
class ModeError : public Error {
public:
    using Error::Error;
};

/// Internally inconsistent inputs that cannot arise from a valid matrix.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Eigensolver exhausted its iteration budget. Carries the eigenvalues that did converge.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<std::complex<double>> partial)
        : Error(what), partial_(std::move(partial)) {}

    const std::vector<std::complex<double>>& partial() const noexcept { return partial_; }

private:
    std::vector<std::complex<double>> partial_;
};

/// Input matrix is not square.
class ShapeError : public Error {
public:
    ShapeError(std::size_t rows, std::size_t cols)
        : Error("matrix is not square: " + std::to_string(rows) + " rows, " + std::to_string(cols) +
                " columns"),
          rows_(rows), cols_(cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

private:
    std::size_t rows_;
    std::size_t cols_;
};

/// Malformed input text, annotated with a 1-based line and column.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed input carrying a forbidden value (NaN or Inf entries).
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace tracebound
