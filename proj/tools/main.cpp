// Command-line front end: analytic ABL/weak-value queries and Monte Carlo
// pointer simulations over built-in or file-defined scenarios, reported as
// JSON (default) or flattened CSV.
//
// Exit codes: 0 success (including a "no data" simulation), 2 usage or
// validation error, 3 undefined analytic quantity (orthogonal selections,
// impossible post-selection), 4 I/O error.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "tsvf/errors.hpp"
#include "tsvf/measure.hpp"
#include "tsvf/pointer.hpp"
#include "tsvf/report.hpp"
#include "tsvf/rng.hpp"
#include "tsvf/scenario.hpp"
#include "tsvf/two_state.hpp"

namespace {

using namespace tsvf;

struct Options {
    std::string scenario = "three-box";
    std::string observable; // empty = take the scenario default
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    double sigma = 0.0; // 0 = unset, fall back to the scenario / 10.0
    int n_particles = 0; // 0 = unset
    std::string mode = "strong";
    std::string format = "json";
    bool no_timing = false;
};

std::size_t dim_budget_from_env() {
    const char* env = std::getenv("TSVF_DIM_BUDGET");
    if (!env || !*env) return kDefaultDimBudget;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
        throw std::invalid_argument("TSVF_DIM_BUDGET must be a positive integer");
    }
    return static_cast<std::size_t>(v);
}

// Built-in name or a path to a scenario document. Pressure mode wants the
// single-particle spec regardless of -N; the particle count is applied by the
// factorized sampler instead.
ScenarioSpec resolve_scenario(const Options& opt, bool force_single_particle = false) {
    const std::size_t budget = dim_budget_from_env();
    if (is_builtin_scenario(opt.scenario)) {
        const int n = force_single_particle ? 1 : (opt.n_particles > 0 ? opt.n_particles : 1);
        return builtin_scenario(opt.scenario, n, budget);
    }
    std::vector<std::string> warnings;
    ScenarioSpec spec = load_scenario_file(opt.scenario, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    spec.name = opt.scenario;
    return spec;
}

ReportValue complex_value(Complex z) {
    ReportValue v = ReportValue::object();
    v.set("re", ReportValue::real(z.real()));
    v.set("im", ReportValue::real(z.imag()));
    return v;
}

ReportValue values_array(const std::vector<double>& values) {
    ReportValue a = ReportValue::array();
    for (const double v : values) a.push(ReportValue::real(v));
    return a;
}

ReportValue single_distribution(const OutcomeDistribution& dist) {
    ReportValue a = ReportValue::array();
    for (const auto& o : dist.outcomes) {
        ReportValue entry = ReportValue::object();
        entry.set("eigenvalue", ReportValue::real(o.values[0]));
        entry.set("probability", ReportValue::real(o.probability));
        a.push(std::move(entry));
    }
    return a;
}

ReportValue element_of_reality_value(const OutcomeDistribution& dist) {
    ReportValue eor = ReportValue::object();
    for (const auto& o : dist.outcomes) {
        if (o.probability >= 1.0 - 1e-9) {
            eor.set("is_element", ReportValue::boolean(true));
            eor.set("value", ReportValue::real(o.values[0]));
            eor.set("probability", ReportValue::real(o.probability));
            return eor;
        }
    }
    eor.set("is_element", ReportValue::boolean(false));
    return eor;
}

ReportValue report_header(const char* command, const ScenarioSpec& spec) {
    ReportValue r = ReportValue::object();
    r.set("command", ReportValue::text(command));
    r.set("scenario", ReportValue::text(spec.name));
    return r;
}

double resolve_sigma(const Options& opt, const ScenarioSpec& spec) {
    if (opt.sigma > 0.0) return opt.sigma;
    if (spec.pointer_sigma) return *spec.pointer_sigma;
    return 10.0;
}

// ---------------------------------------------------------------- commands

ReportValue cmd_abl(const Options& opt) {
    if (opt.observable.empty()) {
        throw std::invalid_argument("abl: --observable is required");
    }
    const ScenarioSpec spec = resolve_scenario(opt);
    const TwoStateVector tsv = spec.two_state();
    const OutcomeDistribution dist = abl_probabilities(tsv, spec.observable(opt.observable));

    ReportValue out = report_header("abl", spec);
    ReportValue params = ReportValue::object();
    params.set("observable", ReportValue::text(opt.observable));
    if (spec.n_particles) params.set("n_particles", ReportValue::integer(static_cast<long long>(*spec.n_particles)));
    out.set("parameters", std::move(params));

    ReportValue analytic = ReportValue::object();
    analytic.set("distribution", single_distribution(dist));
    analytic.set("element_of_reality", element_of_reality_value(dist));
    out.set("analytic", std::move(analytic));
    return out;
}

ReportValue cmd_weak(const Options& opt) {
    if (opt.observable.empty()) {
        throw std::invalid_argument("weak: --operator is required");
    }
    const ScenarioSpec spec = resolve_scenario(opt);
    const TwoStateVector tsv = spec.two_state();
    const Operator op = spec.named_operator(opt.observable);
    const Complex wv = weak_value(tsv, op);

    ReportValue out = report_header("weak", spec);
    ReportValue params = ReportValue::object();
    params.set("operator", ReportValue::text(opt.observable));
    if (spec.n_particles) params.set("n_particles", ReportValue::integer(static_cast<long long>(*spec.n_particles)));
    out.set("parameters", std::move(params));

    ReportValue analytic = ReportValue::object();
    analytic.set("weak_value", complex_value(wv));
    analytic.set("selection_overlap", complex_value(tsv.overlap()));
    out.set("analytic", std::move(analytic));
    return out;
}

ReportValue rarity_value(int n_particles) {
    ReportValue rarity = ReportValue::object();
    rarity.set("n_particles", ReportValue::integer(static_cast<long long>(n_particles)));
    rarity.set("success_probability", ReportValue::real(std::pow(9.0, -n_particles)));
    rarity.set("note",
               ReportValue::text("bare post-selection succeeds with probability 9^(-N); the success "
                                 "amplitude is of the order of 3^{-N}"));
    return rarity;
}

ReportValue simulate_strong(const Options& opt) {
    const ScenarioSpec spec = resolve_scenario(opt);

    std::vector<std::pair<std::string, std::string>> names;
    if (!opt.observable.empty()) {
        if (opt.observable != "none") names = {{opt.observable, "identity"}};
    } else {
        names = spec.schedule;
    }
    std::vector<SequenceStep> schedule;
    std::vector<std::string> labels;
    for (const auto& [obs, unit] : names) {
        schedule.push_back(
            {obs == "identity" ? Operator::identity(spec.dim) : spec.observable(obs), spec.unitary(unit)});
        labels.push_back(obs);
    }

    const ExperimentResult res =
        run_pre_post_experiment(spec.pre, spec.post, schedule, labels, opt.trials, opt.seed);

    ReportValue out = report_header("simulate", spec);
    ReportValue params = ReportValue::object();
    params.set("mode", ReportValue::text("strong"));
    params.set("trials", ReportValue::integer(opt.trials));
    params.set("seed", ReportValue::integer(opt.seed));
    if (!opt.observable.empty()) params.set("observable", ReportValue::text(opt.observable));
    {
        ReportValue sched = ReportValue::array();
        for (const auto& l : labels) sched.push(ReportValue::text(l));
        params.set("schedule", std::move(sched));
    }
    if (spec.n_particles) params.set("n_particles", ReportValue::integer(static_cast<long long>(*spec.n_particles)));
    out.set("parameters", std::move(params));

    // Analytic side; the conditional distribution is undefined when
    // post-selection is impossible, which the simulation reports as no data.
    ReportValue analytic = ReportValue::object();
    analytic.set("success_probability",
                 ReportValue::real(sequence_success_probability(spec.pre, spec.post, schedule)));
    std::optional<OutcomeDistribution> dist;
    try {
        dist = sequence_probabilities(spec.pre, spec.post, schedule);
    } catch (const ImpossiblePostSelection&) {
        analytic.set("note", ReportValue::text("conditional distribution undefined: post-selection "
                                               "impossible for every outcome"));
    }
    if (dist) {
        ReportValue tuples = ReportValue::array();
        for (const auto& o : dist->outcomes) {
            ReportValue entry = ReportValue::object();
            entry.set("values", values_array(o.values));
            entry.set("probability", ReportValue::real(o.probability));
            tuples.push(std::move(entry));
        }
        analytic.set("distribution", std::move(tuples));
        if (res.step_count() >= 2) {
            ReportValue sums = ReportValue::array();
            for (const auto& [value, p] : sum_marginal(*dist)) {
                ReportValue entry = ReportValue::object();
                entry.set("value", ReportValue::real(value));
                entry.set("probability", ReportValue::real(p));
                sums.push(std::move(entry));
            }
            analytic.set("sum_distribution", std::move(sums));
        }
    }
    out.set("analytic", std::move(analytic));

    ReportValue sampled = ReportValue::object();
    sampled.set("trials", ReportValue::integer(res.trials()));
    sampled.set("successes", ReportValue::integer(res.successes()));
    sampled.set("success_rate", ReportValue::real(res.success_rate()));
    sampled.set("success_rate_se", ReportValue::real(res.success_rate_se()));
    if (!res.has_data()) {
        sampled.set("no_data", ReportValue::boolean(true));
    } else {
        const double n_success = static_cast<double>(res.successes());
        ReportValue tuples = ReportValue::array();
        for (std::size_t i = 0; i < res.tuple_count(); ++i) {
            ReportValue entry = ReportValue::object();
            entry.set("values", values_array(res.tuple_values(i)));
            entry.set("count", ReportValue::integer(res.count_for_tuple(i)));
            const double f = res.conditional_frequency(i);
            entry.set("frequency", ReportValue::real(f));
            entry.set("se", ReportValue::real(std::sqrt(f * (1.0 - f) / n_success)));
            tuples.push(std::move(entry));
        }
        sampled.set("tuples", std::move(tuples));
        if (res.step_count() >= 2) {
            std::map<long long, std::uint64_t> by_sum;
            for (std::size_t i = 0; i < res.tuple_count(); ++i) {
                double s = 0.0;
                for (const double v : res.tuple_values(i)) s += v;
                by_sum[std::llround(s * 1e9)] += res.count_for_tuple(i);
            }
            ReportValue sums = ReportValue::array();
            for (const auto& [key, count] : by_sum) {
                ReportValue entry = ReportValue::object();
                const double f = static_cast<double>(count) / n_success;
                entry.set("value", ReportValue::real(static_cast<double>(key) * 1e-9));
                entry.set("count", ReportValue::integer(count));
                entry.set("frequency", ReportValue::real(f));
                entry.set("se", ReportValue::real(std::sqrt(f * (1.0 - f) / n_success)));
                sums.push(std::move(entry));
            }
            sampled.set("sum_frequencies", std::move(sums));
        }
    }
    out.set("sampled", std::move(sampled));

    if (spec.n_particles && *spec.n_particles > 1) {
        out.set("rarity", rarity_value(*spec.n_particles));
    }
    return out;
}

ReportValue simulate_weak(const Options& opt) {
    const ScenarioSpec spec = resolve_scenario(opt);
    std::string obs_name = opt.observable;
    if (obs_name.empty()) {
        if (spec.schedule.empty()) {
            throw std::invalid_argument("simulate --mode weak: --observable is required "
                                        "(the scenario schedule is empty)");
        }
        obs_name = spec.schedule.front().first;
    }
    const double sigma = resolve_sigma(opt, spec);
    const TwoStateVector tsv = spec.two_state();
    const Operator op = spec.named_operator(obs_name);
    const GaussianPointer pointer{sigma, 0.0};
    const PointerMixture mixture = weak_pointer_amplitudes(tsv, op, pointer);
    const PointerSampleRun run = sample_pointer_many(mixture, opt.trials, opt.seed);
    const Complex wv = weak_value(tsv, op);

    ReportValue out = report_header("simulate", spec);
    ReportValue params = ReportValue::object();
    params.set("mode", ReportValue::text("weak"));
    params.set("observable", ReportValue::text(obs_name));
    params.set("trials", ReportValue::integer(opt.trials));
    params.set("seed", ReportValue::integer(opt.seed));
    params.set("sigma", ReportValue::real(sigma));
    if (spec.n_particles) params.set("n_particles", ReportValue::integer(static_cast<long long>(*spec.n_particles)));
    out.set("parameters", std::move(params));

    ReportValue analytic = ReportValue::object();
    analytic.set("weak_value", complex_value(wv));
    analytic.set("pointer_mean", ReportValue::real(run.stats.analytic_mean));
    analytic.set("postselect_probability", ReportValue::real(run.stats.analytic_postselect_probability));
    out.set("analytic", std::move(analytic));

    ReportValue sampled = ReportValue::object();
    sampled.set("n", ReportValue::integer(run.stats.n_trials));
    sampled.set("mean", ReportValue::real(run.stats.sample_mean));
    sampled.set("se", ReportValue::real(run.stats.standard_error()));
    sampled.set("variance", ReportValue::real(run.stats.sample_variance));
    out.set("sampled", std::move(sampled));
    return out;
}

ReportValue simulate_pressure(const Options& opt) {
    const ScenarioSpec spec = resolve_scenario(opt, /*force_single_particle=*/true);
    const int n = opt.n_particles > 0 ? opt.n_particles : spec.n_particles.value_or(1);
    const double sigma = resolve_sigma(opt, spec);
    const TwoStateVector tsv = spec.two_state();

    std::vector<std::string> boxes;
    if (!opt.observable.empty()) {
        boxes.push_back(opt.observable);
    } else {
        // Box occupation questions are projectors; skip anything else.
        for (const auto& [name, op] : spec.observables) {
            if (max_abs_diff(op * op, op) <= 1e-9) boxes.push_back(name);
        }
        if (boxes.empty()) {
            throw std::invalid_argument("simulate --mode pressure: no projector observables in the "
                                        "scenario; pass --observable explicitly");
        }
    }

    ReportValue out = report_header("simulate", spec);
    ReportValue params = ReportValue::object();
    params.set("mode", ReportValue::text("pressure"));
    params.set("n_particles", ReportValue::integer(static_cast<long long>(n)));
    params.set("trials", ReportValue::integer(opt.trials));
    params.set("seed", ReportValue::integer(opt.seed));
    params.set("sigma", ReportValue::real(sigma));
    {
        ReportValue b = ReportValue::array();
        for (const auto& name : boxes) b.push(ReportValue::text(name));
        params.set("boxes", std::move(b));
    }
    out.set("parameters", std::move(params));

    const GaussianPointer pointer{sigma, 0.0};
    ReportValue analytic_boxes = ReportValue::array();
    ReportValue sampled_boxes = ReportValue::array();
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const Operator op = spec.named_operator(boxes[i]);
        // Per-box master seed: mix the user seed once, then offset by the
        // box position so the boxes draw from unrelated streams.
        const std::uint64_t box_seed = RngStream::splitmix64(opt.seed) + i;
        const PressureRun run =
            ensemble_pressure(tsv, op, n, pointer, opt.trials, box_seed, Execution::Parallel, boxes[i]);
        const Complex wv = weak_value(tsv, op);

        ReportValue a = ReportValue::object();
        a.set("box", ReportValue::text(boxes[i]));
        a.set("weak_value", complex_value(wv));
        a.set("aggregate_weak_value", complex_value(static_cast<double>(n) * wv));
        a.set("aggregate_pointer_mean", ReportValue::real(run.stats.analytic_mean));
        a.set("postselect_probability", ReportValue::real(run.stats.analytic_postselect_probability));
        analytic_boxes.push(std::move(a));

        ReportValue s = ReportValue::object();
        s.set("box", ReportValue::text(boxes[i]));
        s.set("n", ReportValue::integer(run.stats.n_trials));
        s.set("mean", ReportValue::real(run.stats.sample_mean));
        s.set("se", ReportValue::real(run.stats.standard_error()));
        s.set("variance", ReportValue::real(run.stats.sample_variance));
        sampled_boxes.push(std::move(s));
    }

    ReportValue analytic = ReportValue::object();
    analytic.set("boxes", std::move(analytic_boxes));
    out.set("analytic", std::move(analytic));
    ReportValue sampled = ReportValue::object();
    sampled.set("boxes", std::move(sampled_boxes));
    out.set("sampled", std::move(sampled));
    if (n > 1) out.set("rarity", rarity_value(n));
    return out;
}

ReportValue cmd_simulate(const Options& opt) {
    if (opt.mode == "strong") return simulate_strong(opt);
    if (opt.mode == "weak") return simulate_weak(opt);
    return simulate_pressure(opt);
}

ReportValue cmd_check(const Options& opt) {
    const ScenarioSpec spec = resolve_scenario(opt);
    const TwoStateVector tsv = spec.two_state();
    const std::vector<std::pair<std::string, Operator>> named(spec.observables.begin(),
                                                              spec.observables.end());

    ReportValue out = report_header("check", spec);
    ReportValue params = ReportValue::object();
    if (spec.n_particles) params.set("n_particles", ReportValue::integer(static_cast<long long>(*spec.n_particles)));
    out.set("parameters", std::move(params));

    ReportValue analytic = ReportValue::object();
    {
        ReportValue eors = ReportValue::array();
        for (const auto& e : elements_of_reality(tsv, named)) {
            ReportValue entry = ReportValue::object();
            entry.set("observable", ReportValue::text(e.label));
            entry.set("value", ReportValue::real(e.value));
            entry.set("probability", ReportValue::real(e.probability));
            eors.push(std::move(entry));
        }
        analytic.set("elements_of_reality", std::move(eors));
    }

    ReportValue pairs = ReportValue::array();
    ReportValue violations = ReportValue::array();
    bool any_applicable = false;
    for (std::size_t i = 0; i < named.size(); ++i) {
        for (std::size_t j = i + 1; j < named.size(); ++j) {
            if (!named[i].second.commutes_with(named[j].second, 1e-9)) continue;
            const ProductRuleReport pr = product_rule_report(tsv, named[i].second, named[j].second);
            ReportValue entry = ReportValue::object();
            entry.set("a", ReportValue::text(named[i].first));
            entry.set("b", ReportValue::text(named[j].first));
            if (pr.value_a) entry.set("value_a", ReportValue::real(*pr.value_a));
            if (pr.value_b) entry.set("value_b", ReportValue::real(*pr.value_b));
            if (pr.value_ab) entry.set("value_ab", ReportValue::real(*pr.value_ab));
            entry.set("applicable", ReportValue::boolean(pr.applicable));
            if (pr.applicable) {
                any_applicable = true;
                entry.set("holds", ReportValue::boolean(pr.holds));
                if (!pr.holds) {
                    ReportValue v = ReportValue::object();
                    v.set("a", ReportValue::text(named[i].first));
                    v.set("b", ReportValue::text(named[j].first));
                    v.set("product_of_values", ReportValue::real(*pr.value_a * *pr.value_b));
                    v.set("value_ab", ReportValue::real(*pr.value_ab));
                    violations.push(std::move(v));
                }
            }
            pairs.push(std::move(entry));
        }
    }
    ReportValue product_rule = ReportValue::object();
    product_rule.set("pairs", std::move(pairs));
    product_rule.set("violations", std::move(violations));
    if (!any_applicable) {
        product_rule.set("note", ReportValue::text("no applicable pairs"));
    }
    analytic.set("product_rule", std::move(product_rule));
    out.set("analytic", std::move(analytic));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pre/post-selected quantum systems: conditional probabilities, weak values, and "
                 "von Neumann pointer simulations"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", opt.scenario,
                        "Built-in scenario (three-box, singlet) or path to a scenario file")
            ->capture_default_str();
        sub->add_option("-N,--particles", opt.n_particles, "Three-box ensemble particle count")
            ->check(CLI::PositiveNumber);
        sub->add_option("--format", opt.format, "Report format")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        sub->add_flag("--no-timing", opt.no_timing, "Omit the timing block (byte-stable output)");
    };

    CLI::App* abl = app.add_subcommand("abl", "Conditional (ABL) outcome probabilities of an observable");
    add_common(abl);
    abl->add_option("--observable,--operator", opt.observable, "Observable name")->required();

    CLI::App* weak = app.add_subcommand("weak", "Weak value of an operator");
    add_common(weak);
    weak->add_option("--operator,--observable", opt.observable, "Operator name")->required();

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo measurement simulation");
    add_common(simulate);
    simulate->add_option("--observable,--operator", opt.observable,
                         "Observable to measure ('none' = bare post-selection in strong mode)");
    simulate->add_option("--trials", opt.trials, "Trial count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--seed", opt.seed, "Master RNG seed")->capture_default_str();
    simulate->add_option("--sigma", opt.sigma, "Pointer spread")->check(CLI::PositiveNumber);
    simulate->add_option("--mode", opt.mode, "strong | weak | pressure")
        ->check(CLI::IsMember({"strong", "weak", "pressure"}))
        ->capture_default_str();

    CLI::App* check = app.add_subcommand("check", "Elements of reality and product-rule audit");
    add_common(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto started = std::chrono::steady_clock::now();
    ReportValue out = ReportValue::object();
    try {
        if (abl->parsed()) {
            out = cmd_abl(opt);
        } else if (weak->parsed()) {
            out = cmd_weak(opt);
        } else if (simulate->parsed()) {
            out = cmd_simulate(opt);
        } else {
            out = cmd_check(opt);
        }
    } catch (const UndefinedWeakValue& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ImpossiblePostSelection& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const VanishingPointerNorm& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ScenarioIoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ScenarioFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }

    if (!opt.no_timing) {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
        ReportValue timing = ReportValue::object();
        timing.set("seconds", ReportValue::real(elapsed.count()));
        out.set("timing", std::move(timing));
    }

    std::cout << (opt.format == "csv" ? out.to_csv() : out.to_json());
    std::cout.flush();
    if (!std::cout) {
        std::cerr << "error: failed to write report to stdout\n";
        return 4;
    }
    return 0;
}
