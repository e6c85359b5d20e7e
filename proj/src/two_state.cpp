#include "tsvf/two_state.hpp"

#include <cmath>
#include <stdexcept>

#include "tsvf/errors.hpp"

namespace tsvf {

namespace {
constexpr double kImpossibleDenominator = 1e-30;
constexpr double kCertaintyThreshold = 1.0 - 1e-9;
} // namespace

TwoStateVector::TwoStateVector(StateVector pre_state, std::optional<StateVector> post_state)
    : pre(std::move(pre_state)), post(std::move(post_state)) {
    if (post && post->dim() != pre.dim()) {
        throw std::invalid_argument("TwoStateVector: pre and post dimensions differ");
    }
}

Complex TwoStateVector::overlap() const {
    if (!post) {
        throw std::invalid_argument("TwoStateVector::overlap: post state absent");
    }
    return inner(*post, pre);
}

double OutcomeDistribution::probability_of(double eigenvalue) const {
    for (const auto& o : outcomes) {
        if (o.values.size() == 1 && std::abs(o.values[0] - eigenvalue) <= 1e-9) {
            return o.probability;
        }
    }
    throw std::invalid_argument("OutcomeDistribution: no outcome with the requested eigenvalue");
}

OutcomeDistribution abl_probabilities(const TwoStateVector& tsv, const SpectralDecomposition& observable) {
    const std::size_t m = observable.outcome_count();
    if (m == 0 || observable.projectors[0].dim() != tsv.dim()) {
        throw std::invalid_argument("abl_probabilities: observable dimension mismatch");
    }

    std::vector<double> weights(m, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto projected = apply(observable.projectors[i], tsv.pre);
        double w;
        if (tsv.post) {
            w = std::norm(inner(*tsv.post, projected));
        } else {
            const double n = norm(projected);
            w = n * n;
        }
        weights[i] = w;
        total += w;
    }
    if (total < kImpossibleDenominator) {
        throw ImpossiblePostSelection(
            "abl_probabilities: impossible post-selection (all conditional amplitudes vanish)");
    }

    OutcomeDistribution dist;
    dist.outcomes.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        dist.outcomes.push_back({{observable.eigenvalues[i]}, weights[i] / total});
    }
    return dist;
}

OutcomeDistribution abl_probabilities(const TwoStateVector& tsv, const Operator& observable) {
    return abl_probabilities(tsv, spectral(observable));
}

namespace {

// Shared enumeration core: fills dist (unnormalized) and returns the total
// weight, i.e. the post-selection success probability.
double enumerate_sequence(const StateVector& pre, const std::optional<StateVector>& post,
                          const std::vector<SequenceStep>& schedule, OutcomeDistribution& dist) {
    std::vector<SpectralDecomposition> specs;
    specs.reserve(schedule.size());
    for (const auto& step : schedule) {
        if (step.observable.dim() != pre.dim() || step.unitary.dim() != pre.dim()) {
            throw std::invalid_argument("sequence_probabilities: dimension mismatch in schedule");
        }
        if (!step.unitary.is_unitary(1e-9)) {
            throw std::invalid_argument("sequence_probabilities: evolution operator is not unitary");
        }
        specs.push_back(spectral(step.observable));
    }
    if (post && post->dim() != pre.dim()) {
        throw std::invalid_argument("sequence_probabilities: post dimension mismatch");
    }

    // Enumerate outcome tuples in lexicographic order, last index fastest.
    std::size_t tuple_count = 1;
    for (const auto& s : specs) tuple_count *= s.outcome_count();

    dist.outcomes.reserve(tuple_count);
    std::vector<std::size_t> idx(schedule.size(), 0);
    double total = 0.0;
    for (std::size_t t = 0; t < tuple_count; ++t) {
        std::size_t rest = t;
        for (std::size_t k = schedule.size(); k-- > 0;) {
            idx[k] = rest % specs[k].outcome_count();
            rest /= specs[k].outcome_count();
        }

        std::vector<Complex> chain = pre.amplitudes();
        for (std::size_t k = 0; k < schedule.size(); ++k) {
            chain = apply(specs[k].projectors[idx[k]], chain);
            chain = apply(schedule[k].unitary, chain);
        }
        double w;
        if (post) {
            w = std::norm(inner(*post, chain));
        } else {
            const double n = norm(chain);
            w = n * n;
        }

        OutcomeDistribution::Outcome o;
        o.values.reserve(schedule.size());
        for (std::size_t k = 0; k < schedule.size(); ++k) {
            o.values.push_back(specs[k].eigenvalues[idx[k]]);
        }
        o.probability = w; // normalized by the caller
        dist.outcomes.push_back(std::move(o));
        total += w;
    }
    return total;
}

} // namespace

OutcomeDistribution sequence_probabilities(const StateVector& pre,
                                           const std::optional<StateVector>& post,
                                           const std::vector<SequenceStep>& schedule) {
    OutcomeDistribution dist;
    const double total = enumerate_sequence(pre, post, schedule, dist);
    if (total < kImpossibleDenominator) {
        throw ImpossiblePostSelection(
            "sequence_probabilities: impossible post-selection (all tuple amplitudes vanish)");
    }
    for (auto& o : dist.outcomes) o.probability /= total;
    return dist;
}

double sequence_success_probability(const StateVector& pre, const std::optional<StateVector>& post,
                                    const std::vector<SequenceStep>& schedule) {
    if (!post) return 1.0;
    OutcomeDistribution dist;
    return enumerate_sequence(pre, post, schedule, dist);
}

Complex weak_value(const TwoStateVector& tsv, const Operator& op) {
    if (!tsv.post) {
        throw UndefinedWeakValue("weak_value: post-selected state absent");
    }
    if (op.dim() != tsv.dim()) {
        throw std::invalid_argument("weak_value: operator dimension mismatch");
    }
    const Complex s = tsv.overlap();
    if (std::abs(s) < 1e-12) {
        throw UndefinedWeakValue("weak_value: orthogonal pre- and post-selection");
    }
    return inner(*tsv.post, apply(op, tsv.pre)) / s;
}

std::vector<ElementOfReality> elements_of_reality(
    const TwoStateVector& tsv, const std::vector<std::pair<std::string, Operator>>& observables) {
    std::vector<ElementOfReality> found;
    for (const auto& [label, op] : observables) {
        const OutcomeDistribution dist = abl_probabilities(tsv, op);
        for (const auto& o : dist.outcomes) {
            if (o.probability >= kCertaintyThreshold) {
                found.push_back({label, o.values[0], o.probability});
                break;
            }
        }
    }
    return found;
}

ProductRuleReport product_rule_report(const TwoStateVector& tsv, const Operator& a, const Operator& b) {
    if (!a.commutes_with(b, 1e-9)) {
        throw std::invalid_argument("product_rule_report: observables do not commute; product is not Hermitian");
    }
    // Symmetrized product so roundoff in near-commuting inputs cannot leave a
    // non-Hermitian matrix.
    const Operator ab = Complex(0.5, 0.0) * (a * b + b * a);

    auto certain_value = [&](const Operator& op) -> std::optional<double> {
        const OutcomeDistribution dist = abl_probabilities(tsv, op);
        for (const auto& o : dist.outcomes) {
            if (o.probability >= kCertaintyThreshold) return o.values[0];
        }
        return std::nullopt;
    };

    ProductRuleReport report;
    report.value_a = certain_value(a);
    report.value_b = certain_value(b);
    report.value_ab = certain_value(ab);
    report.applicable = report.value_a && report.value_b && report.value_ab;
    if (report.applicable) {
        report.holds = std::abs(*report.value_ab - (*report.value_a) * (*report.value_b)) <= 1e-9;
    }
    return report;
}

} // namespace tsvf
