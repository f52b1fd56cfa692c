#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace itts {

// Base for all artifact errors. DataError covers malformed or inconsistent
// inputs (CLI exit code 2); everything else maps to internal error (code 3).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

struct EmptyInput : DataError {
    EmptyInput() : DataError("empty input") {}
};

struct UnsupportedChar : DataError {
    std::size_t position;
    explicit UnsupportedChar(std::size_t pos)
        : DataError("unsupported character at position " + std::to_string(pos)),
          position(pos) {}
};

struct ParseError : DataError {
    std::size_t line;
    ParseError(std::size_t line_no, const std::string& what)
        : DataError("parse error at line " + std::to_string(line_no) + ": " + what),
          line(line_no) {}
    explicit ParseError(const std::string& what) : DataError("parse error: " + what), line(0) {}
};

struct AnnotationMismatch : DataError {
    std::size_t line;
    std::size_t index;
    AnnotationMismatch(std::size_t line_no, std::size_t token_index, const std::string& what)
        : DataError("annotation mismatch at line " + std::to_string(line_no) + ", token " +
                    std::to_string(token_index) + ": " + what),
          line(line_no),
          index(token_index) {}
};

struct IndexError : DataError {
    explicit IndexError(const std::string& what) : DataError("index error: " + what) {}
};

struct ShapeError : DataError {
    std::string tensor;
    explicit ShapeError(const std::string& name, const std::string& what = "")
        : DataError("shape error for '" + name + "'" + (what.empty() ? "" : ": " + what)),
          tensor(name) {}
};

struct ConfigError : DataError {
    explicit ConfigError(const std::string& what) : DataError("config error: " + what) {}
};

struct OutOfPrefix : DataError {
    int token_index;
    explicit OutOfPrefix(int n)
        : DataError("token " + std::to_string(n) + " lies outside the encoded prefix"),
          token_index(n) {}
};

struct DegenerateVector : DataError {
    explicit DegenerateVector(const std::string& what) : DataError("degenerate vector: " + what) {}
};

struct EmptyData : DataError {
    explicit EmptyData(const std::string& what) : DataError("empty data: " + what) {}
};

struct TrainingError : DataError {
    explicit TrainingError(const std::string& what) : DataError("training error: " + what) {}
};

struct EvalError : DataError {
    explicit EvalError(const std::string& what) : DataError("evaluation error: " + what) {}
};

struct FormatError : DataError {
    explicit FormatError(const std::string& what) : DataError("format error: " + what) {}
};

struct AlignmentError : DataError {
    int token_index;
    AlignmentError(int token, const std::string& what)
        : DataError("alignment error for token " + std::to_string(token) + ": " + what),
          token_index(token) {}
};

struct RateError : DataError {
    explicit RateError(const std::string& what) : DataError("sample rate mismatch: " + what) {}
};

struct OverlapError : DataError {
    explicit OverlapError(const std::string& what) : DataError("overlap error: " + what) {}
};

struct MissingPrefix : DataError {
    int prefix_c;
    explicit MissingPrefix(int c)
        : DataError("no waveform for prefix of " + std::to_string(c) + " tokens"), prefix_c(c) {}
};

struct RangeError : DataError {
    std::size_t row;
    RangeError(std::size_t row_no, const std::string& what)
        : DataError("range error at row " + std::to_string(row_no) + ": " + what), row(row_no) {}
};

struct DuplicateError : DataError {
    explicit DuplicateError(const std::string& what) : DataError("duplicate entry: " + what) {}
};

struct MissingReference : DataError {
    MissingReference() : DataError("no hidden reference ratings present") {}
};

struct InsufficientData : DataError {
    explicit InsufficientData(const std::string& what) : DataError("insufficient data: " + what) {}
};

struct NotFound : DataError {
    explicit NotFound(const std::string& what) : DataError("not found: " + what) {}
};

struct DependencyError : DataError {
    explicit DependencyError(const std::string& what) : DataError("missing stage output: " + what) {}
};

}  // namespace itts
