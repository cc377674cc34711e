#pragma once

#include <stdexcept>
#include <string>

namespace jetcalc {

// Domain errors raised by the library. The CLI maps all of them to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define JETCALC_ERROR(Name)                                              \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& what) : Error(what) {}          \
    }

JETCALC_ERROR(IncompatibleRing);
JETCALC_ERROR(OutOfRange);
JETCALC_ERROR(IncompleteSubstitution);
JETCALC_ERROR(DegenerateLattice);
JETCALC_ERROR(SingularInput);
JETCALC_ERROR(EmptyBundle);
JETCALC_ERROR(UnknownLabel);
JETCALC_ERROR(DepthViolation);
JETCALC_ERROR(InvalidCover);
JETCALC_ERROR(InvalidCell);
JETCALC_ERROR(InvalidTree);
JETCALC_ERROR(NotSignConstant);
JETCALC_ERROR(AuxMissing);
JETCALC_ERROR(ArityMismatch);
JETCALC_ERROR(InvalidTrivialization);
JETCALC_ERROR(InvalidArgument);

#undef JETCALC_ERROR

} // namespace jetcalc
