#include "tsvf/measure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>

#include "tsvf/errors.hpp"

namespace tsvf {

namespace {

// Runs f(trial) for every trial index. The parallel path must not leak
// exceptions across the OpenMP region, so the first failure is captured and
// rethrown after the loop.
template <typename F>
void for_each_trial(std::size_t trials, Execution exec, F&& f) {
    if (exec == Execution::Parallel) {
        std::atomic<bool> failed{false};
        std::string message;
#pragma omp parallel for schedule(static)
        for (long long t = 0; t < static_cast<long long>(trials); ++t) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                f(static_cast<std::size_t>(t));
            } catch (const std::exception& e) {
                bool expected = false;
                if (failed.compare_exchange_strong(expected, true)) {
                    message = e.what();
                }
            }
        }
        if (failed.load()) {
            throw std::runtime_error(message.empty() ? "trial failed" : message);
        }
    } else {
        for (std::size_t t = 0; t < trials; ++t) f(t);
    }
}

std::size_t sample_index(const std::vector<double>& weights, double total, RngStream& rng) {
    const double u = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1; // roundoff fallthrough
}

} // namespace

StrongMeasurement strong_measure(const StateVector& state, const SpectralDecomposition& observable,
                                 RngStream& rng) {
    const std::size_t m = observable.outcome_count();
    if (m == 0 || observable.projectors[0].dim() != state.dim()) {
        throw std::invalid_argument("strong_measure: observable dimension mismatch");
    }
    std::vector<std::vector<Complex>> projected(m);
    std::vector<double> weights(m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        projected[i] = tsvf::apply(observable.projectors[i], state);
        const double n = norm(projected[i]);
        weights[i] = n * n;
        total += weights[i];
    }
    const std::size_t i = sample_index(weights, total, rng);
    return {observable.eigenvalues[i], i, StateVector::normalized(std::move(projected[i]))};
}

StrongMeasurement strong_measure(const StateVector& state, const Operator& observable, RngStream& rng) {
    return strong_measure(state, spectral(observable), rng);
}

double ExperimentResult::success_rate() const {
    return trials() == 0 ? 0.0 : static_cast<double>(successes_) / static_cast<double>(trials());
}

double ExperimentResult::success_rate_se() const {
    if (trials() == 0) return 0.0;
    const double p = success_rate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials()));
}

std::vector<double> ExperimentResult::tuple_values(std::size_t flat_index) const {
    std::vector<double> values(step_count());
    std::size_t rest = flat_index;
    for (std::size_t k = step_count(); k-- > 0;) {
        const std::size_t m = step_eigenvalues_[k].size();
        values[k] = step_eigenvalues_[k][rest % m];
        rest /= m;
    }
    return values;
}

double ExperimentResult::conditional_frequency(std::size_t flat_index) const {
    if (successes_ == 0) return 0.0;
    return static_cast<double>(tuple_counts_[flat_index]) / static_cast<double>(successes_);
}

TrialRecord ExperimentResult::trial(std::size_t index) const {
    TrialRecord rec;
    rec.postselected = postselected_[index] != 0;
    rec.outcomes.reserve(step_count());
    for (std::size_t k = 0; k < step_count(); ++k) {
        const std::uint32_t oi = outcome_indices_[index * step_count() + k];
        rec.outcomes.emplace_back(labels_[k], step_eigenvalues_[k][oi]);
    }
    return rec;
}

ExperimentResult run_pre_post_experiment(const StateVector& pre, const std::optional<StateVector>& post,
                                         const std::vector<SequenceStep>& schedule,
                                         const std::vector<std::string>& labels, std::size_t trials,
                                         std::uint64_t seed, Execution exec) {
    if (trials < 1) {
        throw std::invalid_argument("run_pre_post_experiment: trials must be >= 1");
    }
    if (post && post->dim() != pre.dim()) {
        throw std::invalid_argument("run_pre_post_experiment: post dimension mismatch");
    }
    if (!labels.empty() && labels.size() != schedule.size()) {
        throw std::invalid_argument("run_pre_post_experiment: label count does not match schedule");
    }

    struct PreparedStep {
        SpectralDecomposition spec;
        const Operator* unitary;
        bool unitary_is_identity;
    };
    std::vector<PreparedStep> steps;
    steps.reserve(schedule.size());
    for (const auto& s : schedule) {
        if (s.observable.dim() != pre.dim() || s.unitary.dim() != pre.dim()) {
            throw std::invalid_argument("run_pre_post_experiment: dimension mismatch in schedule");
        }
        if (!s.unitary.is_unitary(1e-9)) {
            throw std::invalid_argument("run_pre_post_experiment: evolution operator is not unitary");
        }
        const bool is_id = max_abs_diff(s.unitary, Operator::identity(pre.dim())) == 0.0;
        steps.push_back({spectral(s.observable), &s.unitary, is_id});
    }

    ExperimentResult result;
    result.labels_.reserve(schedule.size());
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        result.labels_.push_back(labels.empty() ? "obs" + std::to_string(k) : labels[k]);
        result.step_eigenvalues_.push_back(steps[k].spec.eigenvalues);
    }
    result.postselected_.assign(trials, 0);
    result.outcome_indices_.assign(trials * schedule.size(), 0);

    const std::size_t n_steps = schedule.size();
    for_each_trial(trials, exec, [&](std::size_t t) {
        RngStream rng(seed, t);
        std::vector<Complex> state = pre.amplitudes();
        std::vector<Complex> projected;
        for (std::size_t k = 0; k < n_steps; ++k) {
            const auto& spec = steps[k].spec;
            std::vector<double> weights(spec.outcome_count());
            double total = 0.0;
            for (std::size_t i = 0; i < spec.outcome_count(); ++i) {
                const double n = norm(tsvf::apply(spec.projectors[i], state));
                weights[i] = n * n;
                total += weights[i];
            }
            const std::size_t chosen = sample_index(weights, total, rng);
            projected = tsvf::apply(spec.projectors[chosen], state);
            const double n = norm(projected);
            for (auto& x : projected) x /= n;
            state = std::move(projected);
            if (!steps[k].unitary_is_identity) {
                state = tsvf::apply(*steps[k].unitary, state);
            }
            result.outcome_indices_[t * n_steps + k] = static_cast<std::uint32_t>(chosen);
        }
        bool success = true;
        if (post) {
            const double p = std::norm(inner(*post, state));
            success = rng.uniform() < p;
        }
        result.postselected_[t] = success ? 1 : 0;
    });

    // Aggregate in trial order; independent of the execution policy.
    std::size_t tuple_count = 1;
    for (const auto& s : steps) tuple_count *= s.spec.outcome_count();
    result.tuple_counts_.assign(tuple_count, 0);
    for (std::size_t t = 0; t < trials; ++t) {
        if (!result.postselected_[t]) continue;
        ++result.successes_;
        std::size_t flat = 0;
        for (std::size_t k = 0; k < n_steps; ++k) {
            flat = flat * steps[k].spec.outcome_count() + result.outcome_indices_[t * n_steps + k];
        }
        ++result.tuple_counts_[flat];
    }
    return result;
}

double PointerStatistics::standard_error() const {
    if (n_trials == 0) return 0.0;
    return std::sqrt(sample_variance / static_cast<double>(n_trials));
}

PointerSampleRun sample_pointer_many(const PointerMixture& mixture, std::size_t n, std::uint64_t seed,
                                     Execution exec) {
    if (n < 1) {
        throw std::invalid_argument("sample_pointer_many: n must be >= 1");
    }
    const PointerMean analytic = pointer_conditional_mean(mixture); // validates the norm

    PointerSampleRun run;
    run.samples.assign(n, 0.0);
    for_each_trial(n, exec, [&](std::size_t t) {
        RngStream rng(seed, t);
        run.samples[t] = sample_pointer(mixture, rng);
    });

    const double mean = compensated_mean(run.samples);
    run.stats = {mean, sample_variance(run.samples, mean), n, analytic.mean,
                 std::min(1.0, analytic.postselect_probability)};
    return run;
}

TrialRecord PressureRun::trial(std::size_t index) const {
    TrialRecord rec;
    rec.postselected = true; // the factorized sampler conditions on success
    rec.pointer_readings.emplace_back(label, readings[index]);
    return rec;
}

PressureRun ensemble_pressure(const TwoStateVector& tsv_single, const Operator& box, int n_particles,
                              const GaussianPointer& pointer, std::size_t trials, std::uint64_t seed,
                              Execution exec, std::string label) {
    if (n_particles < 1) {
        throw std::invalid_argument("ensemble_pressure: n_particles must be >= 1");
    }
    if (trials < 1) {
        throw std::invalid_argument("ensemble_pressure: trials must be >= 1");
    }
    const PointerMixture mixture = weak_pointer_amplitudes(tsv_single, box, pointer);
    const PointerMean single = pointer_conditional_mean(mixture); // throws if impossible

    PressureRun run;
    run.label = std::move(label);
    run.readings.assign(trials, 0.0);
    for_each_trial(trials, exec, [&](std::size_t t) {
        RngStream rng(seed, t);
        double aggregate = 0.0;
        for (int k = 0; k < n_particles; ++k) {
            aggregate += sample_pointer(mixture, rng);
        }
        run.readings[t] = aggregate;
    });

    const double mean = compensated_mean(run.readings);
    const double p_single = std::min(1.0, mixture.squared_norm());
    run.stats = {mean, sample_variance(run.readings, mean), trials, n_particles * single.mean,
                 std::pow(p_single, n_particles)};
    return run;
}

double compensated_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (const double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double compensated_mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return compensated_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - mean;
        sq[i] = d * d;
    }
    return compensated_sum(sq) / static_cast<double>(xs.size() - 1);
}

std::vector<std::pair<double, double>> sum_marginal(const OutcomeDistribution& dist) {
    std::map<long long, double> bucket; // key = round(sum / 1e-9)
    for (const auto& o : dist.outcomes) {
        double s = 0.0;
        for (const double v : o.values) s += v;
        bucket[std::llround(s * 1e9)] += o.probability;
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(bucket.size());
    for (const auto& [key, p] : bucket) {
        out.emplace_back(static_cast<double>(key) * 1e-9, p);
    }
    return out;
}

} // namespace tsvf
