#pragma once

#include <stdexcept>
#include <string>

namespace wnafcert {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mixing values with different (q, p) is a programming error.
struct ParamsMismatch : Error {
    ParamsMismatch() : Error("params mismatch: operands live in different Z[tau]") {}
};

struct NotDivisible : Error {
    NotDivisible() : Error("div_tau: element is not divisible by tau") {}
};

struct DivisibleInput : Error {
    DivisibleInput() : Error("minimal_norm_rep: input is divisible by tau") {}
};

// Internal consistency failure: the minimal-norm representative is unique,
// so a tie can never occur on valid inputs.
struct TieDetected : Error {
    TieDetected() : Error("minimal_norm_rep: tie between candidates of minimal norm") {}
};

struct NonTermination : Error {
    NonTermination() : Error("wnaf: iteration cap exceeded") {}
};

struct RectangleDegenerate : Error {
    RectangleDegenerate() : Error("rectangle R_w has no positive area for these parameters") {}
};

struct ZeroElement : Error {
    ZeroElement() : Error("argument of zero element is undefined") {}
};

struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& what)
        : Error("precision ceiling reached: " + what) {}
};

struct NoDeltaFound : Error {
    NoDeltaFound() : Error("no admissible change delta for this lattice point") {}
};

struct NoCompensation : Error {
    NoCompensation() : Error("no compensating digit pair near the search center") {}
};

struct ConstructionFailed : Error {
    explicit ConstructionFailed(const std::string& stage)
        : Error("certificate construction failed at stage: " + stage) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& what) : Error("out of range: " + what) {}
};

}  // namespace wnafcert
