#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "tsvf/hilbert.hpp"
#include "tsvf/measure.hpp"
#include "tsvf/pointer.hpp"
#include "tsvf/rng.hpp"
#include "tsvf/two_state.hpp"

using namespace tsvf;

namespace {

const double kS3 = 1.0 / std::sqrt(3.0);

StateVector three_box_pre() { return StateVector::normalized({kS3, kS3, kS3}); }
StateVector three_box_post() { return StateVector::normalized({kS3, kS3, -kS3}); }

Operator box(std::size_t i) {
    Operator p = Operator::zero(3);
    p.at(i, i) = 1.0;
    return p;
}

} // namespace

TEST_CASE("strong measurement collapses onto the sampled eigenspace") {
    const StateVector plus = StateVector::normalized({1.0, 1.0});
    const Operator sz = Operator::from_rows({{1, 0}, {0, -1}});
    RngStream rng(2, 0);

    int ups = 0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        const StrongMeasurement m = strong_measure(plus, sz, rng);
        if (m.eigenvalue > 0) {
            ++ups;
            CHECK(std::abs(m.collapsed[0]) == doctest::Approx(1.0).epsilon(1e-12));
        } else {
            CHECK(std::abs(m.collapsed[1]) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    // Born rule: 50/50 within 5 binomial SE.
    const double se = std::sqrt(0.25 / n);
    CHECK(std::abs(ups / static_cast<double>(n) - 0.5) < 5.0 * se);
}

TEST_CASE("experiment frequencies agree with the analytic sequence distribution") {
    const std::vector<SequenceStep> schedule{{box(0), Operator::identity(3)},
                                             {box(1), Operator::identity(3)}};
    const ExperimentResult res = run_pre_post_experiment(
        three_box_pre(), three_box_post(), schedule, {"P_A", "P_B"}, 60000, 11);
    const OutcomeDistribution dist =
        sequence_probabilities(three_box_pre(), three_box_post(), schedule);

    REQUIRE(res.tuple_count() == dist.outcomes.size());
    REQUIRE(res.successes() > 1000);
    const double n = static_cast<double>(res.successes());
    for (std::size_t i = 0; i < res.tuple_count(); ++i) {
        CHECK(res.tuple_values(i) == dist.outcomes[i].values);
        const double p = dist.outcomes[i].probability;
        const double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / n);
        CHECK(std::abs(res.conditional_frequency(i) - p) < 4.0 * se);
    }

    // success rate tracks the analytic selection probability (1/3 here)
    const double sp = sequence_success_probability(three_box_pre(), three_box_post(), schedule);
    CHECK(std::abs(res.success_rate() - sp) < 4.0 * res.success_rate_se());
}

TEST_CASE("parallel and serial execution produce identical results") {
    const std::vector<SequenceStep> schedule{{box(2), Operator::identity(3)}};
    const ExperimentResult serial = run_pre_post_experiment(
        three_box_pre(), three_box_post(), schedule, {"P_C"}, 20000, 7, Execution::Serial);
    const ExperimentResult parallel = run_pre_post_experiment(
        three_box_pre(), three_box_post(), schedule, {"P_C"}, 20000, 7, Execution::Parallel);
    CHECK(serial == parallel);

    // Per-trial records are reproducible and labeled.
    const TrialRecord r0 = serial.trial(0);
    REQUIRE(r0.outcomes.size() == 1);
    CHECK(r0.outcomes[0].first == "P_C");
    CHECK(serial.trial(0) == parallel.trial(0));
}

TEST_CASE("bare post-selection succeeds at the overlap probability") {
    const ExperimentResult res =
        run_pre_post_experiment(three_box_pre(), three_box_post(), {}, {}, 100000, 3);
    CHECK(res.step_count() == 0);
    CHECK(res.tuple_count() == 1);
    const double p = 1.0 / 9.0;
    CHECK(std::abs(res.success_rate() - p) < 4.0 * std::sqrt(p * (1.0 - p) / 100000.0));

    // Without a post-selection every trial counts.
    const ExperimentResult all =
        run_pre_post_experiment(three_box_pre(), std::nullopt, {}, {}, 500, 3);
    CHECK(all.successes() == 500);
    CHECK(all.success_rate() == 1.0);
}

TEST_CASE("zero successes is reported as data-free, not as an error") {
    // Orthogonal pre/post with no measurement in between: every trial fails.
    const ExperimentResult res = run_pre_post_experiment(
        StateVector::basis(2, 0), StateVector::basis(2, 1), {}, {}, 300, 1);
    CHECK(!res.has_data());
    CHECK(res.successes() == 0);
    CHECK(res.success_rate() == 0.0);
    CHECK(res.conditional_frequency(0) == 0.0);
}

TEST_CASE("pointer sampling run: statistics, determinism, execution equality") {
    const TwoStateVector tsv(three_box_pre(), three_box_post());
    const PointerMixture mix = weak_pointer_amplitudes(tsv, box(2), GaussianPointer{10.0, 0.0});

    const PointerSampleRun serial = sample_pointer_many(mix, 30000, 5, Execution::Serial);
    const PointerSampleRun parallel = sample_pointer_many(mix, 30000, 5, Execution::Parallel);
    CHECK(serial.samples == parallel.samples);

    CHECK(serial.stats.n_trials == 30000);
    CHECK(serial.stats.analytic_mean == doctest::Approx(-0.992541952488352).epsilon(1e-12));
    CHECK(std::abs(serial.stats.sample_mean - serial.stats.analytic_mean) <
          4.0 * serial.stats.standard_error());
}

TEST_CASE("ensemble pressure: aggregate weak readings at N = 10") {
    const TwoStateVector tsv(three_box_pre(), three_box_post());
    const GaussianPointer pointer{10.0, 0.0};

    const PressureRun c_run = ensemble_pressure(tsv, box(2), 10, pointer, 40000, 7,
                                                Execution::Parallel, "P_C");
    CHECK(c_run.stats.analytic_mean == doctest::Approx(-9.92541952488352).epsilon(1e-10));
    CHECK(std::abs(c_run.stats.sample_mean - c_run.stats.analytic_mean) <
          4.0 * c_run.stats.standard_error());
    // within 5% of the weak-value prediction -10
    CHECK(std::abs(c_run.stats.sample_mean - (-10.0)) < 0.5);

    const PressureRun a_run = ensemble_pressure(tsv, box(0), 10, pointer, 40000, 7,
                                                Execution::Parallel, "P_A");
    CHECK(a_run.stats.analytic_mean == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(std::abs(a_run.stats.sample_mean - 10.0) < 0.5);
    // box A couples through a single packet: per-particle selection chance
    // is exactly 1/9, so the ensemble rate is 9^-10.
    CHECK(a_run.stats.analytic_postselect_probability ==
          doctest::Approx(std::pow(9.0, -10.0)).epsilon(1e-9));

    const PressureRun serial = ensemble_pressure(tsv, box(2), 10, pointer, 5000, 7,
                                                 Execution::Serial, "P_C");
    const PressureRun parallel = ensemble_pressure(tsv, box(2), 10, pointer, 5000, 7,
                                                   Execution::Parallel, "P_C");
    CHECK(serial.readings == parallel.readings);

    const TrialRecord rec = serial.trial(3);
    CHECK(rec.postselected);
    REQUIRE(rec.pointer_readings.size() == 1);
    CHECK(rec.pointer_readings[0].first == "P_C");
    CHECK(rec.pointer_readings[0].second == serial.readings[3]);

    CHECK_THROWS_AS(ensemble_pressure(tsv, box(0), 0, pointer, 10, 1), std::invalid_argument);
}

TEST_CASE("input validation of the experiment driver") {
    CHECK_THROWS_AS(
        run_pre_post_experiment(three_box_pre(), three_box_post(), {}, {}, 0, 1),
        std::invalid_argument);
    CHECK_THROWS_AS(run_pre_post_experiment(three_box_pre(), StateVector::basis(2, 0), {}, {}, 10, 1),
                    std::invalid_argument);
    const std::vector<SequenceStep> bad{{box(0), box(0)}}; // projector is not unitary
    CHECK_THROWS_AS(
        run_pre_post_experiment(three_box_pre(), three_box_post(), bad, {}, 10, 1),
        std::invalid_argument);
    const std::vector<SequenceStep> ok{{box(0), Operator::identity(3)}};
    CHECK_THROWS_AS(
        run_pre_post_experiment(three_box_pre(), three_box_post(), ok, {"a", "b"}, 10, 1),
        std::invalid_argument);
}

TEST_CASE("compensated summation and variance helpers") {
    // 1 + 1e-16 * 10^8 accumulates exactly with Neumaier compensation.
    std::vector<double> xs{1.0};
    for (int i = 0; i < 1000; ++i) xs.push_back(1e-16);
    CHECK(compensated_sum(xs) == doctest::Approx(1.0 + 1000e-16).epsilon(1e-15));

    const std::vector<double> ys{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
    const double mean = compensated_mean(ys);
    CHECK(mean == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(sample_variance(ys, mean) == doctest::Approx(32.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("sum marginal merges equal tuple sums") {
    OutcomeDistribution dist;
    dist.outcomes = {{{1.0, -1.0}, 0.25}, {{-1.0, 1.0}, 0.25}, {{1.0, 1.0}, 0.3}, {{-1.0, -1.0}, 0.2}};
    const auto sums = sum_marginal(dist);
    REQUIRE(sums.size() == 3);
    CHECK(sums[0].first == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(sums[0].second == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(sums[1].first == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sums[1].second == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sums[2].first == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sums[2].second == doctest::Approx(0.3).epsilon(1e-12));
}
