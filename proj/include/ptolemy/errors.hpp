#pragma once

#include <stdexcept>
#include <string>

namespace ptolemy {

struct Error : std::runtime_error {
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind(std::move(kind)) {}
    std::string kind;
};

#define PTOLEMY_ERROR_TYPE(Name)                                          \
    struct Name : Error {                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}     \
    }

// triangulation
PTOLEMY_ERROR_TYPE(SelfFoldedTriangle);
PTOLEMY_ERROR_TYPE(BadGluing);
PTOLEMY_ERROR_TYPE(WrongArcCount);
PTOLEMY_ERROR_TYPE(EulerMismatch);
PTOLEMY_ERROR_TYPE(IllegalFlip);

// qdilog
PTOLEMY_ERROR_TYPE(PoleHit);
PTOLEMY_ERROR_TYPE(NonConvergent);
PTOLEMY_ERROR_TYPE(QuadratureFailure);
PTOLEMY_ERROR_TYPE(PoleOfContinuation);

// heisenberg
PTOLEMY_ERROR_TYPE(RankDeficient);
PTOLEMY_ERROR_TYPE(Overflow);

// opcalc
PTOLEMY_ERROR_TYPE(NonCommuting);
PTOLEMY_ERROR_TYPE(UnsupportedShape);
PTOLEMY_ERROR_TYPE(SupportOverflow);
PTOLEMY_ERROR_TYPE(AliasRisk);
PTOLEMY_ERROR_TYPE(RotationResamplingError);

// intertwiner
PTOLEMY_ERROR_TYPE(InvalidLoop);

// io / cli
PTOLEMY_ERROR_TYPE(InputError);

#undef PTOLEMY_ERROR_TYPE

}  // namespace ptolemy
