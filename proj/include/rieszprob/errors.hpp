#pragma once

#include <stdexcept>
#include <string>

namespace rieszprob {

/// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structural misuse: elements or operators from different sample spaces,
/// dimension mismatches, partitions that do not cover the space.
struct StructureError : Error {
    using Error::Error;
};

/// Value-level precondition violations: negative input where a positive
/// element is required, a unit that is not T-invariant, weights that do
/// not sum to one.
struct DomainError : Error {
    using Error::Error;
};

/// An enumeration would exceed a configured cap. The message names the cap.
struct CapError : Error {
    using Error::Error;
};

/// Scenario text could not be loaded: parse failure, unresolved name, or
/// an invariant violation. Carries a location string ("line 12" or a JSON
/// pointer) when one is known.
struct ScenarioError : Error {
    ScenarioError(const std::string& message, std::string location = {})
        : Error(location.empty() ? message : message + " (at " + location + ")"),
          location_(std::move(location)) {}

    const std::string& location() const { return location_; }

private:
    std::string location_;
};

}  // namespace rieszprob
