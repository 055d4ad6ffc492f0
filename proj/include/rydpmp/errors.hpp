#pragma once

#include <stdexcept>
#include <string>

namespace rydpmp {

/// Base for every recoverable failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define RYDPMP_DEFINE_ERROR(Name)                \
    class Name : public Error {                  \
    public:                                      \
        using Error::Error;                      \
    }

RYDPMP_DEFINE_ERROR(NoCrossing);
RYDPMP_DEFINE_ERROR(EnergyDrift);
RYDPMP_DEFINE_ERROR(NoRealSolution);
RYDPMP_DEFINE_ERROR(InconsistentInvariants);
RYDPMP_DEFINE_ERROR(InconsistentInitialData);
RYDPMP_DEFINE_ERROR(MissingPotential);
RYDPMP_DEFINE_ERROR(OptimizationFailed);
RYDPMP_DEFINE_ERROR(Stalled);
RYDPMP_DEFINE_ERROR(DurationMismatch);
RYDPMP_DEFINE_ERROR(ConfigError);

#undef RYDPMP_DEFINE_ERROR

/// Malformed record or config file; `path()` is the JSON pointer of the offending field.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace rydpmp
