#include "tracebound/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "tracebound/error.hpp"

namespace tracebound {

namespace {

using Complex = std::complex<double>;
using Matrix = ComplexMatrix<double>;

struct Token {
    std::string_view text;
    std::size_t line;
    std::size_t column;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return lines;
}

std::vector<Token> whitespace_tokens(std::string_view line, std::size_t line_no) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        tokens.push_back({line.substr(start, i - start), line_no, start + 1});
    }
    return tokens;
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

double number_at(const Token& t) {
    double value = 0;
    if (!parse_double(t.text, value)) {
        throw ParseError("expected a number, found '" + std::string(t.text) + "'", t.line, t.column);
    }
    return value;
}

std::size_t size_at(const Token& t) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
        throw ParseError("expected a nonnegative integer, found '" + std::string(t.text) + "'", t.line, t.column);
    }
    return value;
}

void require_finite(const Matrix& a) {
    if (!all_finite(a)) throw ValidationError("matrix contains NaN or Inf entries");
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

enum class Field { real, integer, complex };
enum class Symmetry { general, symmetric, hermitian, skew };

Matrix parse_matrix_market(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines.front().rfind("%%MatrixMarket", 0) != 0) {
        throw ParseError("missing %%MatrixMarket header", 1, 1);
    }
    const auto header = whitespace_tokens(lines.front(), 1);
    if (header.size() != 5 || lower(header[1].text) != "matrix") {
        throw ParseError("header must read: %%MatrixMarket matrix <format> <field> <symmetry>", 1, 1);
    }
    const std::string layout = lower(header[2].text);
    if (layout != "array" && layout != "coordinate") {
        throw ParseError("unknown format '" + std::string(header[2].text) + "'", 1, header[2].column);
    }
    const std::string field_name = lower(header[3].text);
    Field field;
    if (field_name == "real" || field_name == "double") {
        field = Field::real;
    } else if (field_name == "integer") {
        field = Field::integer;
    } else if (field_name == "complex") {
        field = Field::complex;
    } else {
        throw ParseError("unsupported field '" + std::string(header[3].text) + "'", 1, header[3].column);
    }
    const std::string symmetry_name = lower(header[4].text);
    Symmetry symmetry;
    if (symmetry_name == "general") {
        symmetry = Symmetry::general;
    } else if (symmetry_name == "symmetric") {
        symmetry = Symmetry::symmetric;
    } else if (symmetry_name == "hermitian") {
        symmetry = Symmetry::hermitian;
    } else if (symmetry_name == "skew-symmetric") {
        symmetry = Symmetry::skew;
    } else {
        throw ParseError("unknown symmetry '" + std::string(header[4].text) + "'", 1, header[4].column);
    }
    if (symmetry == Symmetry::hermitian && field != Field::complex) symmetry = Symmetry::symmetric;

    // Flatten all data tokens after the header, skipping comments and blank lines.
    std::vector<Token> tokens;
    std::size_t last_line = 1;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty() || line.front() == '%') continue;
        auto row = whitespace_tokens(lines[i], i + 1);
        tokens.insert(tokens.end(), row.begin(), row.end());
        last_line = i + 1;
    }
    std::size_t pos = 0;
    auto next = [&]() -> const Token& {
        if (pos >= tokens.size()) throw ParseError("unexpected end of file", last_line + 1, 1);
        return tokens[pos++];
    };

    const Token& rows_token = next();
    const std::size_t rows = size_at(rows_token);
    const std::size_t cols = size_at(next());
    if (rows != cols) throw ShapeError(rows, cols);
    const std::size_t n = rows;
    if (n == 0) throw ParseError("matrix order must be positive", rows_token.line, rows_token.column);

    auto read_value = [&]() -> Complex {
        const double re = number_at(next());
        const double im = field == Field::complex ? number_at(next()) : 0.0;
        return {re, im};
    };

    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    auto place = [&](std::size_t i, std::size_t j, Complex v) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        if (i == j) return;
        Complex mirrored = v;
        switch (symmetry) {
        case Symmetry::general: return;
        case Symmetry::symmetric: break;
        case Symmetry::hermitian: mirrored = std::conj(v); break;
        case Symmetry::skew: mirrored = -v; break;
        }
        a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = mirrored;
    };

    if (layout == "array") {
        // Column-major; symmetric layouts store the lower triangle only.
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t first = 0;
            if (symmetry == Symmetry::symmetric || symmetry == Symmetry::hermitian) first = j;
            if (symmetry == Symmetry::skew) first = j + 1;
            for (std::size_t i = first; i < n; ++i) place(i, j, read_value());
        }
    } else {
        const std::size_t entries = size_at(next());
        for (std::size_t e = 0; e < entries; ++e) {
            const Token& it = next();
            const std::size_t i = size_at(it);
            const Token& jt = next();
            const std::size_t j = size_at(jt);
            if (i < 1 || i > n) throw ParseError("row index out of range", it.line, it.column);
            if (j < 1 || j > n) throw ParseError("column index out of range", jt.line, jt.column);
            if (symmetry == Symmetry::skew && i == j) {
                throw ParseError("skew-symmetric matrix lists a diagonal entry", it.line, it.column);
            }
            place(i - 1, j - 1, read_value());
        }
    }
    if (pos != tokens.size()) {
        const Token& extra = tokens[pos];
        throw ParseError("unexpected trailing data '" + std::string(extra.text) + "'", extra.line, extra.column);
    }
    return a;
}

Matrix parse_csv(std::string_view text) {
    std::vector<std::vector<Complex>> rows;
    const auto lines = split_lines(text);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string_view line = lines[li];
        if (trim(line).empty()) continue;
        std::vector<Complex> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string_view cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            try {
                row.push_back(parse_complex_token(cell));
            } catch (const ParseError& e) {
                std::size_t column = start + 1;
                while (column - 1 < line.size() && std::isspace(static_cast<unsigned char>(line[column - 1]))) ++column;
                throw ParseError("cannot read '" + std::string(trim(cell)) + "' as a number", li + 1, column);
            }
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("row has " + std::to_string(row.size()) + " values, expected " +
                                 std::to_string(rows.front().size()),
                             li + 1, 1);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no data", 1, 1);
    const std::size_t n = rows.size();
    if (rows.front().size() != n) throw ShapeError(n, rows.front().size());
    Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return a;
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

Matrix parse_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("invalid JSON", line, column);
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries")) {
        throw ParseError("expected an object with \"n\" and \"entries\"", 1, 1);
    }
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
        throw ParseError("\"n\" must be a positive integer", 1, 1);
    }
    const auto n = static_cast<std::size_t>(doc["n"].get<long long>());
    const auto& entries = doc["entries"];
    if (!entries.is_array()) throw ParseError("\"entries\" must be an array", 1, 1);
    if (entries.size() != n * n) {
        if (entries.size() % n == 0) throw ShapeError(entries.size() / n, n);
        throw ParseError("expected " + std::to_string(n * n) + " entries, found " + std::to_string(entries.size()), 1, 1);
    }
    Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
        const auto& e = entries[idx];
        Complex value;
        if (e.is_number()) {
            value = e.get<double>();
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            value = {e[0].get<double>(), e[1].get<double>()};
        } else {
            throw ParseError("entry " + std::to_string(idx) + " must be [re, im]", 1, 1);
        }
        a(static_cast<Eigen::Index>(idx / n), static_cast<Eigen::Index>(idx % n)) = value;
    }
    return a;
}

} // namespace

const char* to_string(MatrixFormat format) {
    switch (format) {
    case MatrixFormat::matrix_market: return "mm";
    case MatrixFormat::json: return "json";
    case MatrixFormat::csv: return "csv";
    }
    return "unknown";
}

MatrixFormat parse_format_name(const std::string& name) {
    if (name == "mm" || name == "matrix_market") return MatrixFormat::matrix_market;
    if (name == "json") return MatrixFormat::json;
    if (name == "csv") return MatrixFormat::csv;
    throw ParameterError("unknown matrix format '" + name + "'");
}

std::optional<MatrixFormat> format_from_extension(const std::filesystem::path& path) {
    const std::string ext = lower(path.extension().string());
    if (ext == ".mtx" || ext == ".mm") return MatrixFormat::matrix_market;
    if (ext == ".json") return MatrixFormat::json;
    if (ext == ".csv") return MatrixFormat::csv;
    return std::nullopt;
}

std::complex<double> parse_complex_token(std::string_view token) {
    token = trim(token);
    auto bad = [&] { return ParseError("cannot read '" + std::string(token) + "' as a number", 1, 1); };
    if (token.empty()) throw bad();

    const char last = token.back();
    if (last != 'i' && last != 'j' && last != 'I' && last != 'J') {
        double re = 0;
        if (!parse_double(token, re)) throw bad();
        return {re, 0.0};
    }
    // "inf"/"nan" never end in i, so a trailing i always marks the imaginary part.
    const std::string_view body = token.substr(0, token.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    const std::string_view real_part = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
    std::string_view imag_part = split == std::string_view::npos ? body : body.substr(split);

    double re = 0, im = 0;
    if (!real_part.empty() && !parse_double(real_part, re)) throw bad();
    if (imag_part.empty() || imag_part == "+") {
        im = 1;
    } else if (imag_part == "-") {
        im = -1;
    } else if (!parse_double(imag_part, im)) {
        throw bad();
    }
    return {re, im};
}

ComplexMatrix<double> parse_matrix_text(std::string_view text, MatrixFormat format) {
    Matrix a;
    switch (format) {
    case MatrixFormat::matrix_market: a = parse_matrix_market(text); break;
    case MatrixFormat::json: a = parse_json(text); break;
    case MatrixFormat::csv: a = parse_csv(text); break;
    }
    require_finite(a);
    return a;
}

ComplexMatrix<double> parse_matrix(const std::filesystem::path& path, std::optional<MatrixFormat> format) {
    if (!format) format = format_from_extension(path);
    if (!format) throw ParameterError("cannot infer matrix format of '" + path.string() + "'; pass --format");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_matrix_text(buffer.str(), *format);
}

std::string matrix_to_json(const ComplexMatrix<double>& a) {
    require_square(a);
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) entries.push_back({a(i, j).real(), a(i, j).imag()});
    }
    return nlohmann::json{{"n", a.rows()}, {"entries", entries}}.dump();
}

} // namespace tracebound
