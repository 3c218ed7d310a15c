#pragma once

#include <stdexcept>
#include <string>

namespace showdag {

// Base class for all library errors. Validation problems that should be
// reported rather than thrown go through graph::Violation instead.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DuplicateRole : Error { using Error::Error; };
struct UnknownNode : Error { using Error::Error; };
struct SelfLoop : Error { using Error::Error; };
struct CycleIntroduced : Error { using Error::Error; };
struct MissingCounterpart : Error { using Error::Error; };
struct UnknownVariable : Error { using Error::Error; };
struct ExplanationAlreadyPresent : Error { using Error::Error; };
struct OverlappingSets : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct UnboundNode : Error { using Error::Error; };
struct EmptyStratum : Error { using Error::Error; };
struct DegenerateVariance : Error { using Error::Error; };
struct NoIntuition : Error { using Error::Error; };
struct AnonymizedInstance : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };

}  // namespace showdag
