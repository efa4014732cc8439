#pragma once

#include <stdexcept>
#include <string>

namespace vdgv {

enum class ErrorKind {
    ReduciblePolynomial,
    DegreeMismatch,
    AmbientTooSmall,
    NoSolution,
    CtxMismatch,
    ZeroPolynomial,
    ZeroDivisor,
    NotDivisible,
    CapExceeded,
    NotSelfAdjoint,
    NotIsotropic,
    NotInKernel,
    NotSubspaceOfW,
    NotSymplectic,
    StabilizerNotCompatible,
    NotOnCurve,
    ConditionViolated,
    NonRealCount,
    BudgetExceeded,
    KernelNotRational,
    NoTwistParameter,
    PairingConditionFailed,
    OddDegree,
    HypothesisFailed,
    RootsNotSimple,
    FOneNonzero,
    FieldTooSmall,
    OracleMismatch,
    ParseError,
    Internal,
};

const char* error_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& what) { throw Error(k, what); }

inline void require(bool ok, ErrorKind k, const std::string& what)
{
    if (!ok)
        fail(k, what);
}

}  // namespace vdgv
