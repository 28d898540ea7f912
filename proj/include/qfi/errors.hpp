#pragma once

#include <stdexcept>
#include <string>

namespace qfi {

/// Base class for all library errors. `kind()` is the stable error name
/// used in CLI exit diagnostics and tests.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// operator_space
struct NotHermitian : Error { explicit NotHermitian(const std::string& w) : Error("NotHermitian", w) {} };
struct NotUnitTrace : Error { explicit NotUnitTrace(const std::string& w) : Error("NotUnitTrace", w) {} };
struct RankDeficient : Error { explicit RankDeficient(const std::string& w) : Error("RankDeficient", w) {} };
struct NotPositive : Error { explicit NotPositive(const std::string& w) : Error("NotPositive", w) {} };
struct DimensionMismatch : Error { explicit DimensionMismatch(const std::string& w) : Error("DimensionMismatch", w) {} };
struct ZeroSeed : Error { explicit ZeroSeed(const std::string& w) : Error("ZeroSeed", w) {} };
struct NotTracePreserving : Error { explicit NotTracePreserving(const std::string& w) : Error("NotTracePreserving", w) {} };
struct NonTracelessDerivative : Error { explicit NonTracelessDerivative(const std::string& w) : Error("NonTracelessDerivative", w) {} };

// lanczos
struct NonConvergedOrthogonality : Error { explicit NonConvergedOrthogonality(const std::string& w) : Error("NonConvergedOrthogonality", w) {} };
struct SingularTridiagonal : Error { explicit SingularTridiagonal(const std::string& w) : Error("SingularTridiagonal", w) {} };

// qfi
struct IncompleteKrylov : Error { explicit IncompleteKrylov(const std::string& w) : Error("IncompleteKrylov", w) {} };
struct ZeroVector : Error { explicit ZeroVector(const std::string& w) : Error("ZeroVector", w) {} };
struct IdentityViolation : Error { explicit IdentityViolation(const std::string& w) : Error("IdentityViolation", w) {} };

// spectral
struct NormalizationFailure : Error { explicit NormalizationFailure(const std::string& w) : Error("NormalizationFailure", w) {} };
struct HankelIllConditioned : Error { explicit HankelIllConditioned(const std::string& w) : Error("HankelIllConditioned", w) {} };
struct NodeAtZero : Error { explicit NodeAtZero(const std::string& w) : Error("NodeAtZero", w) {} };
struct InsufficientAtoms : Error { explicit InsufficientAtoms(const std::string& w) : Error("InsufficientAtoms", w) {} };

// synthetic
struct BadAlpha : Error { explicit BadAlpha(const std::string& w) : Error("BadAlpha", w) {} };
struct BadInterval : Error { explicit BadInterval(const std::string& w) : Error("BadInterval", w) {} };
struct Breakdown : Error { explicit Breakdown(const std::string& w) : Error("Breakdown", w) {} };
struct NonPositiveSeries : Error { explicit NonPositiveSeries(const std::string& w) : Error("NonPositiveSeries", w) {} };
struct WindowTooShort : Error { explicit WindowTooShort(const std::string& w) : Error("WindowTooShort", w) {} };

// models / cli
struct DimensionTooLarge : Error { explicit DimensionTooLarge(const std::string& w) : Error("DimensionTooLarge", w) {} };
struct IoError : Error { explicit IoError(const std::string& w) : Error("IoError", w) {} };
struct ConfigError : Error { explicit ConfigError(const std::string& w) : Error("ConfigError", w) {} };

} // namespace qfi
