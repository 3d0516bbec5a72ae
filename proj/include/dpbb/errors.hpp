#pragma once

#include <stdexcept>
#include <string>

namespace dpbb {

/// Raised by the parser; carries the 1-based position of the offending token.
class parse_error : public std::runtime_error {
public:
    parse_error(std::string msg, int line, int column)
        : std::runtime_error(std::move(msg)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Raised when a configurable resource cap (state count, lasso count) is hit.
/// Signals a bug or adversarial input rather than a legitimate "no" answer.
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr std::size_t default_state_cap = 100000;
inline constexpr std::size_t default_lasso_cap = 10000;

} // namespace dpbb
