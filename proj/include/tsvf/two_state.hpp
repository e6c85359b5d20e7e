#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsvf/hilbert.hpp"

namespace tsvf {

/// A system between two selections: the pre-selected state propagated forward
/// to the evaluation time and, when present, the post-selected state
/// propagated backward to the same time. Absent post means "pre-selected
/// only", in which case conditional probabilities reduce to the Born rule.
/// Any propagation between the selection times is the caller's business; this
/// type stores states already evolved to the evaluation time.
struct TwoStateVector {
    StateVector pre;
    std::optional<StateVector> post;

    TwoStateVector(StateVector pre_state, std::optional<StateVector> post_state);
    std::size_t dim() const { return pre.dim(); }
    bool has_post() const { return post.has_value(); }
    /// <post|pre>; only meaningful when post is present.
    Complex overlap() const;
};

/// A distribution over measurement outcomes. Each outcome carries one value
/// per measured observable (a single value for single-time distributions,
/// a tuple for measurement sequences).
struct OutcomeDistribution {
    struct Outcome {
        std::vector<double> values;
        double probability;
    };
    std::vector<Outcome> outcomes;

    /// Probability of a single-time outcome with the given eigenvalue;
    /// throws if no outcome matches within 1e-9.
    double probability_of(double eigenvalue) const;
};

/// A measurement whose result is certain: the conditional probability of
/// `value` is 1 (within 1e-9), so the result can be inferred without
/// performing the measurement.
struct ElementOfReality {
    std::string label;
    double value;
    double probability;
};

struct SequenceStep {
    Operator observable;
    Operator unitary; // applied after the measurement
};

/// Conditional probabilities for an intermediate measurement given both
/// selections:
///   P(a_i) = |<post|Pi_i|pre>|^2 / sum_k |<post|Pi_k|pre>|^2.
/// With post absent this is the Born rule P(a_i) = ||Pi_i |pre>||^2.
/// Throws ImpossiblePostSelection when every conditional amplitude vanishes
/// (denominator below 1e-30).
OutcomeDistribution abl_probabilities(const TwoStateVector& tsv, const Operator& observable);
OutcomeDistribution abl_probabilities(const TwoStateVector& tsv, const SpectralDecomposition& observable);

/// Multi-time generalization over a schedule of measurements, each followed
/// by a unitary: P(a, b, ...) proportional to |<post| ... Pi_b U_1 Pi_a |pre>|^2,
/// normalized over all outcome tuples. With post absent the chain amplitude
/// norm gives the Born probability of the outcome sequence.
OutcomeDistribution sequence_probabilities(const StateVector& pre,
                                           const std::optional<StateVector>& post,
                                           const std::vector<SequenceStep>& schedule);

/// Probability that the post-selection succeeds when the schedule is strongly
/// measured: sum over outcome tuples of |<post| chain |pre>|^2. With post
/// absent every run "succeeds" and the result is 1. An empty schedule gives
/// the bare overlap probability |<post|pre>|^2.
double sequence_success_probability(const StateVector& pre, const std::optional<StateVector>& post,
                                    const std::vector<SequenceStep>& schedule);

/// Weak value <post|A|pre> / <post|pre>. Complex in general and unbounded by
/// the spectrum. Throws UndefinedWeakValue when post is absent or the
/// selections are orthogonal (|overlap| < 1e-12).
Complex weak_value(const TwoStateVector& tsv, const Operator& op);

/// Scans named observables and returns one entry per observable whose ABL
/// distribution puts probability >= 1 - 1e-9 on a single outcome.
std::vector<ElementOfReality> elements_of_reality(
    const TwoStateVector& tsv, const std::vector<std::pair<std::string, Operator>>& observables);

/// Checks the product rule "A=a and B=b implies AB=ab" for a commuting pair.
/// Applicable only when A, B and AB all have elements of reality; for pre-
/// and post-selected systems the rule can fail even then.
struct ProductRuleReport {
    std::optional<double> value_a;
    std::optional<double> value_b;
    std::optional<double> value_ab;
    bool applicable = false;
    bool holds = false;
};

/// Throws std::invalid_argument if a and b do not commute within 1e-9 (the
/// product would not be an observable).
ProductRuleReport product_rule_report(const TwoStateVector& tsv, const Operator& a, const Operator& b);

} // namespace tsvf
