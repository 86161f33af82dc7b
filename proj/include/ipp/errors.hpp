#pragma once

#include <stdexcept>
#include <string>

namespace ipp {

// Bad or inconsistent configuration (unknown wind kind, degenerate region, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Query outside the covered domain of a field or grid.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Linear-algebra failure that survived jitter escalation.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller violated a documented precondition (e.g. v0 below wind speed).
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// A stage artifact file is missing or malformed (e.g. running a later
// pipeline stage before its inputs were produced).
struct ArtifactError : std::runtime_error {
    explicit ArtifactError(const std::string& msg) : std::runtime_error(msg) {}
};

// A simulated vehicle failed to complete its route within budget.
struct MissionError : std::runtime_error {
    explicit MissionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ipp
