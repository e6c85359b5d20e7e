#pragma once

#include <stdexcept>
#include <string>

namespace tsvf {

// Post-selection cannot succeed for any outcome of the requested measurement:
// every conditional amplitude vanishes, so the ABL distribution is undefined.
struct ImpossiblePostSelection : std::runtime_error {
    explicit ImpossiblePostSelection(const std::string& what) : std::runtime_error(what) {}
};

// Weak value is undefined: the post-selected state is absent or orthogonal to
// the pre-selected state.
struct UndefinedWeakValue : std::runtime_error {
    explicit UndefinedWeakValue(const std::string& what) : std::runtime_error(what) {}
};

// The post-selected pointer wavefunction has (numerically) vanishing norm, so
// no conditional pointer distribution exists at this coupling.
struct VanishingPointerNorm : std::runtime_error {
    explicit VanishingPointerNorm(const std::string& what) : std::runtime_error(what) {}
};

// A scenario document violates the schema or a physical invariant.
struct ScenarioFormatError : std::runtime_error {
    explicit ScenarioFormatError(const std::string& what) : std::runtime_error(what) {}
};

// A scenario file could not be read or written.
struct ScenarioIoError : std::runtime_error {
    explicit ScenarioIoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tsvf
