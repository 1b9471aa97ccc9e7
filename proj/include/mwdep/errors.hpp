#pragma once

#include <stdexcept>
#include <string>

namespace mwdep {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can map kinds onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MWDEP_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                               \
    public:                                                                   \
        using Error::Error;                                                   \
    }

MWDEP_DEFINE_ERROR(InvalidArgument);
MWDEP_DEFINE_ERROR(DivisionByZero);
MWDEP_DEFINE_ERROR(InvariantViolation);
MWDEP_DEFINE_ERROR(Unsupported);
MWDEP_DEFINE_ERROR(PreconditionFailure);
MWDEP_DEFINE_ERROR(ResourceLimit);
MWDEP_DEFINE_ERROR(DegenerateBasis);
MWDEP_DEFINE_ERROR(DegenerateInput);
MWDEP_DEFINE_ERROR(ToleranceTooCoarse);
MWDEP_DEFINE_ERROR(InconsistentInput);
MWDEP_DEFINE_ERROR(InternalError);

#undef MWDEP_DEFINE_ERROR

} // namespace mwdep
