#pragma once

#include <stdexcept>
#include <string>

namespace terralens {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define TERRALENS_DEFINE_ERROR(Name)                                 \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& what) : Error(what) {}     \
    }

TERRALENS_DEFINE_ERROR(InvalidArgument);
TERRALENS_DEFINE_ERROR(AntipodalOrCoincident);
TERRALENS_DEFINE_ERROR(DegeneratePath);
TERRALENS_DEFINE_ERROR(DegeneratePolygon);
TERRALENS_DEFINE_ERROR(OutsideProjection);
TERRALENS_DEFINE_ERROR(NearPole);
TERRALENS_DEFINE_ERROR(Unreachable);
TERRALENS_DEFINE_ERROR(GenerationExhausted);
TERRALENS_DEFINE_ERROR(EmptySample);
TERRALENS_DEFINE_ERROR(EmptyLog);
TERRALENS_DEFINE_ERROR(DegenerateInput);
TERRALENS_DEFINE_ERROR(ParseError);
TERRALENS_DEFINE_ERROR(OutputError);

#undef TERRALENS_DEFINE_ERROR

}  // namespace terralens
