#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsvf/hilbert.hpp"
#include "tsvf/two_state.hpp"

namespace tsvf {

/// Largest Hilbert-space dimension a builder will materialize densely
/// (3^12). Beyond it the factorized ensemble_pressure path is the way to go.
inline constexpr std::size_t kDefaultDimBudget = 531441;

/// A named, self-contained experiment description: selections, a dictionary
/// of operators, and a default measurement schedule. Immutable once built.
///
/// Basis conventions of the built-ins:
///   three-box  A=0, B=1, C=2
///   singlet    up-up=0, up-down=1, down-up=2, down-down=3
struct ScenarioSpec {
    std::string name;
    std::size_t dim;
    StateVector pre;
    std::optional<StateVector> post;
    std::map<std::string, Operator> observables;
    std::map<std::string, Operator> unitaries;
    /// (observable name, unitary name); "identity" is always resolvable.
    std::vector<std::pair<std::string, std::string>> schedule;
    std::optional<double> pointer_sigma;
    std::optional<int> n_particles;

    TwoStateVector two_state() const;
    /// Throws ScenarioFormatError on an unknown name.
    const Operator& observable(const std::string& obs_name) const;
    /// Resolves a unitary by name; "identity" is always available.
    Operator unitary(const std::string& unit_name) const;
    /// Loose lookup for operator names given on a command line: observables,
    /// then unitaries, then the implicit "identity".
    Operator named_operator(const std::string& op_name) const;
    std::vector<SequenceStep> resolve_schedule() const;
    std::vector<std::string> schedule_labels() const;

    /// Checks every invariant (dims, schedule names, Hermiticity, unitarity);
    /// throws ScenarioFormatError with the offending name on failure.
    void validate() const;
};

/// Pre (|A>+|B>+|C>)/sqrt(3), post (|A>+|B>-|C>)/sqrt(3). For n_particles = 1
/// the observables are the box projectors P_A, P_B, P_C and the location
/// observable X = 0*P_A + 1*P_B + 2*P_C; the default schedule measures P_A.
/// For n_particles > 1 the selections are tensor powers and the observables
/// are the box number operators N_A, N_B, N_C; the schedule is empty (bare
/// post-selection). Throws std::invalid_argument when 3^n_particles exceeds
/// dim_budget, with a pointer to the factorized pressure path.
ScenarioSpec three_box(int n_particles = 1, std::size_t dim_budget = kDefaultDimBudget);

/// Two spin-1/2 particles in (|ud> - |du>)/sqrt(2), no post-selection.
/// Observables sigma_1x, sigma_2x, sigma_1y, sigma_2y; the default schedule
/// measures sigma_1x then sigma_2x.
ScenarioSpec singlet();

std::vector<std::string> builtin_scenario_names();
bool is_builtin_scenario(const std::string& name);
/// Throws std::invalid_argument on an unknown name.
ScenarioSpec builtin_scenario(const std::string& name, int n_particles = 1,
                              std::size_t dim_budget = kDefaultDimBudget);

/// Parses and validates a scenario document (format "tsvf-scenario/1").
/// States off unit norm by at most 1e-6 are renormalized and a note is
/// appended to *warnings; larger deviations are errors. Throws
/// ScenarioFormatError on any schema or invariant violation.
ScenarioSpec load_scenario(const std::string& document, std::vector<std::string>* warnings = nullptr);
/// Reads the file and delegates to load_scenario. Throws ScenarioIoError if
/// the file cannot be read.
ScenarioSpec load_scenario_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Serializes to a document load_scenario accepts; round-trips are
/// semantically identical (states may differ by a global phase).
std::string save_scenario(const ScenarioSpec& spec);

/// Equality up to a global phase per state and entrywise tolerance on
/// operators. The name is ignored; it is presentation, not physics.
bool semantically_equal(const ScenarioSpec& a, const ScenarioSpec& b, double tol = 1e-12);

} // namespace tsvf
