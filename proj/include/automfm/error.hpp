#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace automfm {

// Base for every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Malformed element path syntax.
class PathError : public Error
{
public:
    using Error::Error;
};

// Model construction failures (empty id, duplicate names, bad values).
class ModelError : public Error
{
public:
    using Error::Error;
};

// Text that cannot be read. line/column are 1-based; 0 means unknown.
class ParseError : public Error
{
public:
    ParseError(std::string message, std::size_t line, std::size_t column = 0)
        : Error(format(message, line, column))
        , detail_(std::move(message))
        , line_(line)
        , column_(column)
    {
    }

    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, std::size_t line, std::size_t column)
    {
        std::string out = std::to_string(line);
        if (column != 0)
            out += ":" + std::to_string(column);
        return out + ": " + message;
    }

    std::string detail_;
    std::size_t line_;
    std::size_t column_;
};

// Well-formed XML that uses a construct outside the supported CAEX subset.
class UnsupportedConstruct : public ParseError
{
public:
    using ParseError::ParseError;
};

// A document whose shape cannot be mapped onto a module (e.g. two module roots).
class StructuralError : public Error
{
public:
    using Error::Error;
};

// Behavior subjects that do not bind to the module's components or I/O variables.
class BindingError : public Error
{
public:
    explicit BindingError(std::vector<std::string> problems)
        : Error(join(problems))
        , problems_(std::move(problems))
    {
    }

    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items)
    {
        std::string out = "unbound behavior subjects:";
        for (const auto& item : items)
            out += "\n  " + item;
        return out;
    }

    std::vector<std::string> problems_;
};

// Runtime fault during a token walk (ambiguous branch, livelock, unknown subject).
class SimulationError : public Error
{
public:
    using Error::Error;
};

// Parameter table that is structurally unusable (bad header, broken quoting).
class TableError : public Error
{
public:
    using Error::Error;
};

}  // namespace automfm
