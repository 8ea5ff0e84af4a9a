#pragma once

#include <stdexcept>
#include <string>

namespace torsor_lab {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define TORSOR_LAB_DEFINE_ERROR(Name)                                \
    struct Name : Error {                                            \
        explicit Name(const std::string& msg) : Error(msg) {}        \
    }

// Graph construction.
TORSOR_LAB_DEFINE_ERROR(NotInvolution);
TORSOR_LAB_DEFINE_ERROR(CrossVertexRotation);
TORSOR_LAB_DEFINE_ERROR(Disconnected);

// Wedge operations.
TORSOR_LAB_DEFINE_ERROR(SeedNotAtCutVertex);
TORSOR_LAB_DEFINE_ERROR(IncompatibleCutVertex);

// Divisor algebra.
TORSOR_LAB_DEFINE_ERROR(DegreeMismatch);
TORSOR_LAB_DEFINE_ERROR(ContainsDirectedCycle);

// Rotor / Bernardi processes.
TORSOR_LAB_DEFINE_ERROR(NotASpanningTree);
TORSOR_LAB_DEFINE_ERROR(ChipAtSink);
TORSOR_LAB_DEFINE_ERROR(DartNotAtBasepoint);
TORSOR_LAB_DEFINE_ERROR(BijectivityViolation);

// Torsor checks and witnesses.
TORSOR_LAB_DEFINE_ERROR(InvalidWitnessFields);
TORSOR_LAB_DEFINE_ERROR(WitnessFailed);

// Decomposition search; these signal implementation bugs, not bad input.
TORSOR_LAB_DEFINE_ERROR(SearchExhausted);
TORSOR_LAB_DEFINE_ERROR(LoopBound);

// Internal consistency checks (tour/process identities that must hold).
TORSOR_LAB_DEFINE_ERROR(InvariantViolation);

// File / CLI input problems.
TORSOR_LAB_DEFINE_ERROR(InputError);

#undef TORSOR_LAB_DEFINE_ERROR

} // namespace torsor_lab
