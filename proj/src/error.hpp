#pragma once

#include <stdexcept>
#include <string>

namespace orbq {

// Error kinds surfaced through the C API as status codes.
enum class Err {
    ZeroValuation,
    InsufficientPrecision,
    WrongField,
    NotASquare,
    NotIntegral,
    NotSeparable,
    NotNilpotent,
    NotRegular,
    NotContained,
    NotLattice,
    RankDeficient,
    ProfileIncomplete,
    WindowUnstable,
    CoefficientNotRational,
    TorusData,
    Parse,
    Internal,
};

inline const char* err_name(Err e)
{
    switch (e) {
    case Err::ZeroValuation:          return "ZeroValuation";
    case Err::InsufficientPrecision:  return "InsufficientPrecision";
    case Err::WrongField:             return "WrongField";
    case Err::NotASquare:             return "NotASquare";
    case Err::NotIntegral:            return "NotIntegral";
    case Err::NotSeparable:           return "NotSeparable";
    case Err::NotNilpotent:           return "NotNilpotent";
    case Err::NotRegular:             return "NotRegular";
    case Err::NotContained:           return "NotContained";
    case Err::NotLattice:             return "NotLattice";
    case Err::RankDeficient:          return "RankDeficient";
    case Err::ProfileIncomplete:      return "ProfileIncomplete";
    case Err::WindowUnstable:         return "WindowUnstable";
    case Err::CoefficientNotRational: return "CoefficientNotRational";
    case Err::TorusData:              return "TorusData";
    case Err::Parse:                  return "Parse";
    case Err::Internal:               return "Internal";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Err kind, const std::string& what)
        : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}

    Err kind() const { return kind_; }

private:
    Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& what)
{
    throw Error(kind, what);
}

} // namespace orbq
