#ifndef VOAWB_ERRORS_HPP
#define VOAWB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace voawb {

struct DivisionByZero : std::runtime_error {
    explicit DivisionByZero(const std::string& m = "division by zero") : std::runtime_error(m) {}
};

struct PoleAtLevel : std::runtime_error {
    explicit PoleAtLevel(const std::string& m = "denominator vanishes at this level") : std::runtime_error(m) {}
};

struct CriticalLevel : std::runtime_error {
    explicit CriticalLevel(const std::string& m = "operation undefined at the critical level") : std::runtime_error(m) {}
};

struct CutoffExceeded : std::runtime_error {
    explicit CutoffExceeded(const std::string& m = "truncation cutoff exceeded") : std::runtime_error(m) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& m = "dimension mismatch") : std::runtime_error(m) {}
};

struct WeightMismatch : std::runtime_error {
    explicit WeightMismatch(const std::string& m = "incompatible weights") : std::runtime_error(m) {}
};

struct EmptyChannel : std::runtime_error {
    explicit EmptyChannel(const std::string& m = "invariant channel is empty") : std::runtime_error(m) {}
};

struct GradeMismatch : std::runtime_error {
    explicit GradeMismatch(const std::string& m = "graded components do not match") : std::runtime_error(m) {}
};

struct FrameSolveFailed : std::runtime_error {
    explicit FrameSolveFailed(const std::string& m = "frame transition solve inconsistent") : std::runtime_error(m) {}
};

struct ExtensionInconsistent : std::runtime_error {
    explicit ExtensionInconsistent(const std::string& m = "forced extension violates an axiom") : std::runtime_error(m) {}
};

struct SplittingInvalid : std::runtime_error {
    explicit SplittingInvalid(const std::string& m = "splitting is not a section") : std::runtime_error(m) {}
};

struct ReductionDiverged : std::runtime_error {
    explicit ReductionDiverged(const std::string& m = "reduction failed to terminate") : std::runtime_error(m) {}
};

struct ResonantExponent : std::runtime_error {
    explicit ResonantExponent(const std::string& m = "recursion matrix singular at this order") : std::runtime_error(m) {}
};

struct SolveFailed : std::runtime_error {
    explicit SolveFailed(const std::string& m = "linear solve has no solution") : std::runtime_error(m) {}
};

struct MatchFailed : std::runtime_error {
    explicit MatchFailed(const std::string& m = "subspace match failed") : std::runtime_error(m) {}
};

struct ConfigInvalid : std::runtime_error {
    explicit ConfigInvalid(const std::string& m = "invalid configuration") : std::runtime_error(m) {}
};

struct IOError : std::runtime_error {
    explicit IOError(const std::string& m = "i/o error") : std::runtime_error(m) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& m = "parse error") : std::runtime_error(m) {}
};

} // namespace voawb

#endif
