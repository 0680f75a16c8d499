#pragma once

#include <stdexcept>
#include <string>

namespace trigfit
{

enum class ErrorKind
{
    InvalidArgument,
    InvalidModel,
    UnsupportedGrid,
    DegenerateInput,
    EmptyInterval,
    Numerical,
    Parse,
};

/// Exception type thrown by every trigfit routine. `kind()` lets callers (and
/// the CLI exit-code mapping) distinguish contract violations from numerical
/// breakdowns without string matching.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), m_kind(kind)
    {
    }

    ErrorKind kind() const noexcept
    {
        return m_kind;
    }

private:
    ErrorKind m_kind;
};

} // namespace trigfit
