#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsvf/hilbert.hpp"
#include "tsvf/pointer.hpp"
#include "tsvf/rng.hpp"
#include "tsvf/two_state.hpp"

namespace tsvf {

/// Trials are independent and every trial owns its RNG stream (stream id ==
/// trial index), so the parallel path produces output bit-identical to the
/// serial one. The serial path is kept as the reference implementation for
/// tests and benchmarks.
enum class Execution { Serial, Parallel };

/// Ideal projective measurement: outcome sampled by the Born rule, state
/// collapsed onto the outcome's eigenspace and renormalized.
struct StrongMeasurement {
    double eigenvalue;
    std::size_t outcome_index;
    StateVector collapsed;
};
StrongMeasurement strong_measure(const StateVector& state, const SpectralDecomposition& observable,
                                 RngStream& rng);
StrongMeasurement strong_measure(const StateVector& state, const Operator& observable, RngStream& rng);

/// One simulated trial, materialized for inspection.
struct TrialRecord {
    bool postselected;
    std::vector<std::pair<std::string, double>> outcomes;
    std::vector<std::pair<std::string, double>> pointer_readings;

    bool operator==(const TrialRecord&) const = default;
};

/// Outcome of a repeated prepare / measure-sequence / post-select experiment.
/// Tuple indexing is lexicographic with the last schedule entry fastest, the
/// same order sequence_probabilities uses, so counts and analytic
/// probabilities line up index for index.
class ExperimentResult {
  public:
    std::size_t trials() const { return postselected_.size(); }
    std::uint64_t successes() const { return successes_; }
    bool has_data() const { return successes_ > 0; }
    double success_rate() const;
    double success_rate_se() const;

    std::size_t step_count() const { return step_eigenvalues_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::vector<double>>& step_eigenvalues() const { return step_eigenvalues_; }

    std::size_t tuple_count() const { return tuple_counts_.size(); }
    std::uint64_t count_for_tuple(std::size_t flat_index) const { return tuple_counts_[flat_index]; }
    std::vector<double> tuple_values(std::size_t flat_index) const;
    /// Frequency conditioned on successful post-selection.
    double conditional_frequency(std::size_t flat_index) const;

    TrialRecord trial(std::size_t index) const;

    bool operator==(const ExperimentResult&) const = default;

  private:
    friend ExperimentResult run_pre_post_experiment(const StateVector&, const std::optional<StateVector>&,
                                                    const std::vector<SequenceStep>&,
                                                    const std::vector<std::string>&, std::size_t,
                                                    std::uint64_t, Execution);
    std::vector<std::string> labels_;
    std::vector<std::vector<double>> step_eigenvalues_;
    std::vector<std::uint8_t> postselected_;     // per trial
    std::vector<std::uint32_t> outcome_indices_; // trials * steps, row-major
    std::vector<std::uint64_t> tuple_counts_;    // successes only
    std::uint64_t successes_ = 0;
};

/// Runs `trials` independent trials: prepare `pre`, execute the measurement
/// schedule (projective measurement, then unitary), then post-select on
/// `post` with the Born success probability. Absent post always succeeds.
/// Zero successes is a valid "no data" result, not an error.
ExperimentResult run_pre_post_experiment(const StateVector& pre, const std::optional<StateVector>& post,
                                         const std::vector<SequenceStep>& schedule,
                                         const std::vector<std::string>& labels, std::size_t trials,
                                         std::uint64_t seed, Execution exec = Execution::Parallel);

/// Statistics of a pointer read out under post-selection.
struct PointerStatistics {
    double sample_mean;
    double sample_variance; // unbiased
    std::size_t n_trials;
    double analytic_mean;
    double analytic_postselect_probability;

    double standard_error() const;
};

/// Monte Carlo draws from a conditional pointer distribution, one stream per
/// sample index.
struct PointerSampleRun {
    std::vector<double> samples;
    PointerStatistics stats;
};
PointerSampleRun sample_pointer_many(const PointerMixture& mixture, std::size_t n, std::uint64_t seed,
                                     Execution exec = Execution::Parallel);

/// Summed weak reading of `n_particles` identically pre/post-selected
/// particles, each coupled to its own pointer. Conditioned on all
/// post-selections succeeding the particles are independent, so each trial
/// sums n_particles draws from the single-particle conditional distribution
/// instead of rejection-sampling an exponentially rare ensemble event. The
/// reported analytic post-selection probability is the per-particle coupled
/// probability raised to n_particles.
struct PressureRun {
    std::string label;
    std::vector<double> readings; // per-trial aggregate
    PointerStatistics stats;

    TrialRecord trial(std::size_t index) const;
};
PressureRun ensemble_pressure(const TwoStateVector& tsv_single, const Operator& box, int n_particles,
                              const GaussianPointer& pointer, std::size_t trials, std::uint64_t seed,
                              Execution exec = Execution::Parallel, std::string label = "");

/// Order-insensitive aggregation helpers (Neumaier compensated summation).
double compensated_sum(const std::vector<double>& xs);
double compensated_mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs, double mean);

/// Distribution of the sum of tuple values, e.g. the spin-sum relations of
/// paired measurements. Sums are merged within 1e-9.
std::vector<std::pair<double, double>> sum_marginal(const OutcomeDistribution& dist);

} // namespace tsvf
