#pragma once

#include <stdexcept>
#include <string>

namespace eigengrowth {

/// Base exception. Every error names the module that raised it so the CLI
/// can report "[module] message".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error("[" + module + "] " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

#define EIGENGROWTH_ERROR_KIND(Name)                                             \
    class Name : public Error {                                                  \
    public:                                                                      \
        using Error::Error;                                                      \
    };

EIGENGROWTH_ERROR_KIND(RangeError)
EIGENGROWTH_ERROR_KIND(PreconditionError)
EIGENGROWTH_ERROR_KIND(NotPositiveDefiniteError)
EIGENGROWTH_ERROR_KIND(BracketError)
EIGENGROWTH_ERROR_KIND(SingularityError)
EIGENGROWTH_ERROR_KIND(ConvergenceError)
EIGENGROWTH_ERROR_KIND(QuadratureError)
EIGENGROWTH_ERROR_KIND(GeometryError)
EIGENGROWTH_ERROR_KIND(DomainError)
EIGENGROWTH_ERROR_KIND(ContradictionError)
EIGENGROWTH_ERROR_KIND(HypothesisError)
EIGENGROWTH_ERROR_KIND(EmptyReportError)
EIGENGROWTH_ERROR_KIND(ConfigError)

#undef EIGENGROWTH_ERROR_KIND

}  // namespace eigengrowth
