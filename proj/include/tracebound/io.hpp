#pragma once

// Matrix ingestion. Errors: ShapeError for non-square input, ParseError with a
// 1-based line and column for malformed text, ValidationError for NaN or Inf.

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "tracebound/matrix.hpp"

namespace tracebound {

enum class MatrixFormat { matrix_market, json, csv };

const char* to_string(MatrixFormat format);
/// "mm" (or "matrix_market"), "json", "csv".
MatrixFormat parse_format_name(const std::string& name);
/// .mtx / .mm, .json, .csv; nullopt for anything else.
std::optional<MatrixFormat> format_from_extension(const std::filesystem::path& path);

ComplexMatrix<double> parse_matrix(const std::filesystem::path& path, std::optional<MatrixFormat> format = {});
ComplexMatrix<double> parse_matrix_text(std::string_view text, MatrixFormat format);

/// One CSV cell: "3", "-2.5e1", "1+2i", "4-i", "-3.5i" ('j' is accepted for 'i').
std::complex<double> parse_complex_token(std::string_view token);

/// {"n": n, "entries": [[re, im], ...]} in row-major order.
std::string matrix_to_json(const ComplexMatrix<double>& a);

} // namespace tracebound
