#ifndef ONTOCLUST_ERROR_HPP
#define ONTOCLUST_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ontoclust {

/// Error families. The numeric values double as CLI exit codes.
enum class ErrorCategory : int {
    usage = 1,
    data = 2,
    ontology = 3,
    invariant = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorCategory::usage, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

class InvariantError : public Error {
public:
    explicit InvariantError(const std::string& what) : Error(ErrorCategory::invariant, what) {}
};

enum class OntologyErrc {
    syntax,
    empty,
    duplicate_name,
    duplicate_column,
    missing_parent,
    cycle,
    level_skip,
    leaf_without_column,
    nonleaf_with_column,
    empty_level,
    level_out_of_range,
    unknown_concept,
};

inline const char* to_string(OntologyErrc code) {
    switch (code) {
        case OntologyErrc::syntax: return "syntax error";
        case OntologyErrc::empty: return "empty ontology";
        case OntologyErrc::duplicate_name: return "duplicate name";
        case OntologyErrc::duplicate_column: return "duplicate column binding";
        case OntologyErrc::missing_parent: return "missing parent";
        case OntologyErrc::cycle: return "cycle";
        case OntologyErrc::level_skip: return "level-skip edge";
        case OntologyErrc::leaf_without_column: return "leaf without column binding";
        case OntologyErrc::nonleaf_with_column: return "non-leaf with column binding";
        case OntologyErrc::empty_level: return "empty level";
        case OntologyErrc::level_out_of_range: return "level out of range";
        case OntologyErrc::unknown_concept: return "unknown concept";
    }
    return "ontology error";
}

/// Ontology parse/validation/query failure. `line()` is 1-based, 0 when the
/// error is not tied to a single line.
class OntologyError : public Error {
public:
    OntologyError(OntologyErrc code, const std::string& detail, std::size_t line = 0)
        : Error(ErrorCategory::ontology, format(code, detail, line)), code_(code), line_(line) {}

    OntologyErrc code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(OntologyErrc code, const std::string& detail, std::size_t line) {
        std::string out;
        if (line != 0) {
            out += "line " + std::to_string(line) + ": ";
        }
        out += to_string(code);
        if (!detail.empty()) {
            out += ": " + detail;
        }
        return out;
    }

    OntologyErrc code_;
    std::size_t line_;
};

} // namespace ontoclust

#endif // ONTOCLUST_ERROR_HPP
