#pragma once

#include <stdexcept>
#include <string>

namespace robinlab {

/// Base class for all robinlab failures. what() starts with the error tag.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define ROBINLAB_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                              \
    public:                                                                   \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {}    \
    }

ROBINLAB_DEFINE_ERROR(TooFewVertices);
ROBINLAB_DEFINE_ERROR(NotConvex);
ROBINLAB_DEFINE_ERROR(Degenerate);
ROBINLAB_DEFINE_ERROR(NonUnitDirection);
ROBINLAB_DEFINE_ERROR(NegativeOffset);
ROBINLAB_DEFINE_ERROR(BadParameter);
ROBINLAB_DEFINE_ERROR(NonPositiveInput);
ROBINLAB_DEFINE_ERROR(OutOfDomain);
ROBINLAB_DEFINE_ERROR(NoConvergence);
ROBINLAB_DEFINE_ERROR(MeshTooFine);
ROBINLAB_DEFINE_ERROR(NonMonotoneSequence);
ROBINLAB_DEFINE_ERROR(IoError);

#undef ROBINLAB_DEFINE_ERROR

} // namespace robinlab
