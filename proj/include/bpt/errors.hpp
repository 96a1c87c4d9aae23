#pragma once

// Error taxonomy. Every precondition violation in the library throws one of
// these; the CLI maps them to exit code 2 (bad input) while internal
// consistency failures surface as exit code 1.

#include <stdexcept>
#include <string>

namespace bpt {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// The two vertices handed in are not at distance one.
struct NotAnEdge : Error {
    explicit NotAnEdge(const std::string& msg) : Error(msg) {}
};

// A transverse classification would project onto an endpoint of the segment.
// Geometrically unreachable for real edges; kept as a guard.
struct ProjectionAtEndpoint : Error {
    explicit ProjectionAtEndpoint(const std::string& msg) : Error(msg) {}
};

// Out-of-domain arguments (q < 2, d < 0, transverse index outside 1..d-1, ...).
struct InvalidParameters : Error {
    explicit InvalidParameters(const std::string& msg) : Error(msg) {}
};

// A measure was requested with respect to a base point the shadow was not
// built from.
struct BaseMismatch : Error {
    explicit BaseMismatch(const std::string& msg) : Error(msg) {}
};

// Radon-Nikodym level outside the admissible set for the given pair.
struct InvalidLevel : Error {
    explicit InvalidLevel(const std::string& msg) : Error(msg) {}
};

// A series over an unbounded index range fails the geometric-decay test.
struct NotSummable : Error {
    explicit NotSummable(const std::string& msg) : Error(msg) {}
};

// A locally constant function was handed in without a value on some sphere
// vertex it is supposed to cover.
struct IncompleteCover : Error {
    explicit IncompleteCover(const std::string& msg) : Error(msg) {}
};

// A linear system that should be regular came out degenerate.
struct SingularSystem : Error {
    explicit SingularSystem(const std::string& msg) : Error(msg) {}
};

} // namespace bpt
