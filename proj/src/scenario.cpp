#include "tsvf/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tsvf/errors.hpp"

namespace tsvf {

namespace {

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Operator box_projector(std::size_t box) {
    Operator p = Operator::zero(3);
    p.at(box, box) = 1.0;
    return p;
}

} // namespace

TwoStateVector ScenarioSpec::two_state() const { return TwoStateVector(pre, post); }

const Operator& ScenarioSpec::observable(const std::string& obs_name) const {
    const auto it = observables.find(obs_name);
    if (it == observables.end()) {
        throw ScenarioFormatError("unknown observable '" + obs_name + "' in scenario '" + name + "'");
    }
    return it->second;
}

Operator ScenarioSpec::unitary(const std::string& unit_name) const {
    if (unit_name == "identity") return Operator::identity(dim);
    const auto it = unitaries.find(unit_name);
    if (it == unitaries.end()) {
        throw ScenarioFormatError("unknown unitary '" + unit_name + "' in scenario '" + name + "'");
    }
    return it->second;
}

Operator ScenarioSpec::named_operator(const std::string& op_name) const {
    if (const auto it = observables.find(op_name); it != observables.end()) return it->second;
    if (const auto it = unitaries.find(op_name); it != unitaries.end()) return it->second;
    if (op_name == "identity") return Operator::identity(dim);
    throw ScenarioFormatError("unknown operator '" + op_name + "' in scenario '" + name + "'");
}

std::vector<SequenceStep> ScenarioSpec::resolve_schedule() const {
    std::vector<SequenceStep> steps;
    steps.reserve(schedule.size());
    for (const auto& [obs, unit] : schedule) {
        steps.push_back({obs == "identity" ? Operator::identity(dim) : observable(obs), unitary(unit)});
    }
    return steps;
}

std::vector<std::string> ScenarioSpec::schedule_labels() const {
    std::vector<std::string> labels;
    labels.reserve(schedule.size());
    for (const auto& [obs, unit] : schedule) labels.push_back(obs);
    return labels;
}

void ScenarioSpec::validate() const {
    if (dim == 0) throw ScenarioFormatError("scenario dim must be positive");
    if (pre.dim() != dim) throw ScenarioFormatError("pre state has dim " + std::to_string(pre.dim()) +
                                                    ", scenario has dim " + std::to_string(dim));
    if (post && post->dim() != dim) {
        throw ScenarioFormatError("post state has dim " + std::to_string(post->dim()) +
                                  ", scenario has dim " + std::to_string(dim));
    }
    for (const auto& [obs_name, op] : observables) {
        if (op.dim() != dim) throw ScenarioFormatError("observable '" + obs_name + "' has wrong dim");
        if (!op.is_hermitian(1e-9)) {
            throw ScenarioFormatError("observable '" + obs_name + "' is not Hermitian");
        }
    }
    for (const auto& [unit_name, op] : unitaries) {
        if (op.dim() != dim) throw ScenarioFormatError("unitary '" + unit_name + "' has wrong dim");
        if (!op.is_unitary(1e-9)) {
            throw ScenarioFormatError("unitary '" + unit_name + "' is not unitary");
        }
    }
    for (const auto& [obs, unit] : schedule) {
        if (obs != "identity" && observables.find(obs) == observables.end()) {
            throw ScenarioFormatError("schedule references missing observable '" + obs + "'");
        }
        if (unit != "identity" && unitaries.find(unit) == unitaries.end()) {
            throw ScenarioFormatError("schedule references missing unitary '" + unit + "'");
        }
    }
    if (pointer_sigma && *pointer_sigma <= 0.0) {
        throw ScenarioFormatError("pointer_sigma must be positive");
    }
    if (n_particles && *n_particles < 1) {
        throw ScenarioFormatError("n_particles must be >= 1");
    }
}

ScenarioSpec three_box(int n_particles, std::size_t dim_budget) {
    if (n_particles < 1) throw std::invalid_argument("three_box: n_particles must be >= 1");

    std::size_t dim = 1;
    for (int k = 0; k < n_particles; ++k) {
        if (dim > dim_budget / 3) {
            throw std::invalid_argument(
                "three_box: dense representation needs 3^" + std::to_string(n_particles) +
                " amplitudes, over the dimension budget of " + std::to_string(dim_budget) +
                "; use the factorized ensemble_pressure path (simulate --mode pressure) instead");
        }
        dim *= 3;
    }

    const StateVector pre1 = StateVector::normalized({kInvSqrt3, kInvSqrt3, kInvSqrt3});
    const StateVector post1 = StateVector::normalized({kInvSqrt3, kInvSqrt3, -kInvSqrt3});

    ScenarioSpec spec{
        n_particles == 1 ? "three-box" : "three-box-N" + std::to_string(n_particles),
        dim,
        pre1,
        post1,
        {},
        {},
        {},
        10.0,
        n_particles,
    };

    if (n_particles == 1) {
        spec.observables.emplace("P_A", box_projector(0));
        spec.observables.emplace("P_B", box_projector(1));
        spec.observables.emplace("P_C", box_projector(2));
        spec.observables.emplace("X", Operator::from_rows({{0, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
        spec.schedule = {{"P_A", "identity"}};
        return spec;
    }

    StateVector pre = pre1;
    StateVector post = post1;
    for (int k = 1; k < n_particles; ++k) {
        pre = tensor(pre, pre1);
        post = tensor(post, post1);
    }
    spec.pre = pre;
    spec.post = post;

    for (std::size_t box = 0; box < 3; ++box) {
        const Operator p1 = box_projector(box);
        Operator number = Operator::zero(dim);
        for (int k = 0; k < n_particles; ++k) {
            Operator term = k == 0 ? p1 : Operator::identity(3);
            for (int j = 1; j < n_particles; ++j) {
                term = tensor(term, j == k ? p1 : Operator::identity(3));
            }
            number = number + term;
        }
        const char* names[] = {"N_A", "N_B", "N_C"};
        spec.observables.emplace(names[box], std::move(number));
    }
    return spec;
}

ScenarioSpec singlet() {
    const Operator sx = Operator::from_rows({{0, 1}, {1, 0}});
    const Operator sy = Operator::from_rows({{0, Complex(0, -1)}, {Complex(0, 1), 0}});
    const Operator id2 = Operator::identity(2);

    ScenarioSpec spec{
        "singlet",
        4,
        StateVector::normalized({0.0, kInvSqrt2, -kInvSqrt2, 0.0}),
        std::nullopt,
        {},
        {},
        {{"sigma_1x", "identity"}, {"sigma_2x", "identity"}},
        std::nullopt,
        std::nullopt,
    };
    spec.observables.emplace("sigma_1x", tensor(sx, id2));
    spec.observables.emplace("sigma_2x", tensor(id2, sx));
    spec.observables.emplace("sigma_1y", tensor(sy, id2));
    spec.observables.emplace("sigma_2y", tensor(id2, sy));
    return spec;
}

std::vector<std::string> builtin_scenario_names() { return {"three-box", "singlet"}; }

bool is_builtin_scenario(const std::string& name) {
    return name == "three-box" || name == "singlet";
}

ScenarioSpec builtin_scenario(const std::string& name, int n_particles, std::size_t dim_budget) {
    if (name == "three-box") return three_box(n_particles, dim_budget);
    if (name == "singlet") return singlet();
    throw std::invalid_argument("unknown built-in scenario '" + name + "'");
}

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ScenarioFormatError(message); }

const json& require(const json& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end()) fail(std::string("missing required key '") + key + "'");
    return *it;
}

Complex parse_complex(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(where + ": expected a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Complex> parse_amplitudes(const json& j, std::size_t dim, const std::string& where) {
    if (!j.is_array() || j.size() != dim) {
        fail(where + ": expected an array of " + std::to_string(dim) + " [re, im] pairs");
    }
    std::vector<Complex> amps(dim);
    for (std::size_t i = 0; i < dim; ++i) amps[i] = parse_complex(j[i], where);
    return amps;
}

StateVector parse_state(const json& j, std::size_t dim, const std::string& where,
                        std::vector<std::string>* warnings) {
    std::vector<Complex> amps = parse_amplitudes(j, dim, where);
    const double n = norm(amps);
    if (!(std::abs(n - 1.0) <= 1e-6)) {
        fail(where + ": state not normalized (norm " + std::to_string(n) + ")");
    }
    if (std::abs(n - 1.0) > 1e-9 && warnings) {
        warnings->push_back(where + ": state renormalized (norm deviated by " +
                            std::to_string(std::abs(n - 1.0)) + ")");
    }
    return StateVector::normalized(std::move(amps));
}

Operator parse_matrix(const json& j, std::size_t dim, const std::string& where) {
    if (!j.is_array() || j.size() != dim) {
        fail(where + ": expected " + std::to_string(dim) + " rows");
    }
    std::vector<Complex> entries;
    entries.reserve(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        if (!j[r].is_array() || j[r].size() != dim) {
            fail(where + ": row " + std::to_string(r) + " must have " + std::to_string(dim) +
                 " [re, im] pairs");
        }
        for (std::size_t c = 0; c < dim; ++c) {
            entries.push_back(parse_complex(j[r][c], where));
        }
    }
    return Operator(dim, std::move(entries));
}

json dump_complex(const Complex& z) { return json::array({z.real(), z.imag()}); }

json dump_state(const StateVector& v) {
    json out = json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) out.push_back(dump_complex(v[i]));
    return out;
}

json dump_matrix(const Operator& op) {
    json out = json::array();
    for (std::size_t r = 0; r < op.dim(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < op.dim(); ++c) row.push_back(dump_complex(op.at(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace

ScenarioSpec load_scenario(const std::string& document, std::vector<std::string>* warnings) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        fail(std::string("scenario document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("scenario document must be a JSON object");

    const json& format = require(doc, "format");
    if (!format.is_string() || format.get<std::string>() != "tsvf-scenario/1") {
        fail("unsupported scenario format; expected \"tsvf-scenario/1\"");
    }
    const json& jdim = require(doc, "dim");
    if (!jdim.is_number_unsigned() || jdim.get<std::size_t>() == 0) {
        fail("'dim' must be a positive integer");
    }
    const std::size_t dim = jdim.get<std::size_t>();

    ScenarioSpec spec{
        "custom", dim, parse_state(require(doc, "pre"), dim, "pre", warnings),
        std::nullopt, {}, {}, {}, std::nullopt, std::nullopt,
    };
    if (doc.contains("post") && !doc["post"].is_null()) {
        spec.post = parse_state(doc["post"], dim, "post", warnings);
    }
    if (doc.contains("observables")) {
        const json& obs = doc["observables"];
        if (!obs.is_object()) fail("'observables' must be an object of named matrices");
        for (const auto& [obs_name, jmat] : obs.items()) {
            spec.observables.emplace(obs_name, parse_matrix(jmat, dim, "observables." + obs_name));
        }
    }
    if (doc.contains("unitaries")) {
        const json& uni = doc["unitaries"];
        if (!uni.is_object()) fail("'unitaries' must be an object of named matrices");
        for (const auto& [unit_name, jmat] : uni.items()) {
            spec.unitaries.emplace(unit_name, parse_matrix(jmat, dim, "unitaries." + unit_name));
        }
    }
    if (doc.contains("schedule")) {
        const json& sched = doc["schedule"];
        if (!sched.is_array()) fail("'schedule' must be an array of {observable, unitary} entries");
        for (std::size_t i = 0; i < sched.size(); ++i) {
            const json& entry = sched[i];
            const std::string where = "schedule[" + std::to_string(i) + "]";
            if (!entry.is_object()) fail(where + " must be an object");
            const auto jobs = entry.find("observable");
            if (jobs == entry.end() || !jobs->is_string()) {
                fail(where + ": missing string key 'observable'");
            }
            std::string unit = "identity";
            if (const auto juni = entry.find("unitary"); juni != entry.end()) {
                if (!juni->is_string()) fail(where + ": 'unitary' must be a string");
                unit = juni->get<std::string>();
            }
            spec.schedule.emplace_back(jobs->get<std::string>(), std::move(unit));
        }
    }
    if (doc.contains("pointer_sigma") && !doc["pointer_sigma"].is_null()) {
        if (!doc["pointer_sigma"].is_number()) fail("'pointer_sigma' must be a number");
        spec.pointer_sigma = doc["pointer_sigma"].get<double>();
    }
    if (doc.contains("n_particles") && !doc["n_particles"].is_null()) {
        if (!doc["n_particles"].is_number_integer()) fail("'n_particles' must be an integer");
        spec.n_particles = doc["n_particles"].get<int>();
    }

    spec.validate();
    return spec;
}

ScenarioSpec load_scenario_file(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioIoError("cannot open scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw ScenarioIoError("error reading scenario file '" + path + "'");
    return load_scenario(buffer.str(), warnings);
}

std::string save_scenario(const ScenarioSpec& spec) {
    nlohmann::ordered_json doc;
    doc["format"] = "tsvf-scenario/1";
    doc["dim"] = spec.dim;
    doc["pre"] = dump_state(spec.pre);
    if (spec.post) doc["post"] = dump_state(*spec.post);
    if (!spec.observables.empty()) {
        nlohmann::ordered_json obs = nlohmann::ordered_json::object();
        for (const auto& [obs_name, op] : spec.observables) obs[obs_name] = dump_matrix(op);
        doc["observables"] = std::move(obs);
    }
    if (!spec.unitaries.empty()) {
        nlohmann::ordered_json uni = nlohmann::ordered_json::object();
        for (const auto& [unit_name, op] : spec.unitaries) uni[unit_name] = dump_matrix(op);
        doc["unitaries"] = std::move(uni);
    }
    if (!spec.schedule.empty()) {
        nlohmann::ordered_json sched = nlohmann::ordered_json::array();
        for (const auto& [obs, unit] : spec.schedule) {
            sched.push_back({{"observable", obs}, {"unitary", unit}});
        }
        doc["schedule"] = std::move(sched);
    }
    if (spec.pointer_sigma) doc["pointer_sigma"] = *spec.pointer_sigma;
    if (spec.n_particles) doc["n_particles"] = *spec.n_particles;
    return doc.dump(2) + "\n";
}

namespace {

bool states_equal_up_to_phase(const StateVector& a, const StateVector& b, double tol) {
    if (a.dim() != b.dim()) return false;
    const Complex overlap = inner(a, b);
    if (std::abs(std::abs(overlap) - 1.0) > tol) return false;
    const Complex phase = overlap / std::abs(overlap);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (std::abs(b[i] - phase * a[i]) > tol) return false;
    }
    return true;
}

bool maps_equal(const std::map<std::string, Operator>& a, const std::map<std::string, Operator>& b,
                double tol) {
    if (a.size() != b.size()) return false;
    for (const auto& [key, op] : a) {
        const auto it = b.find(key);
        if (it == b.end() || it->second.dim() != op.dim() || max_abs_diff(op, it->second) > tol) {
            return false;
        }
    }
    return true;
}

} // namespace

bool semantically_equal(const ScenarioSpec& a, const ScenarioSpec& b, double tol) {
    if (a.dim != b.dim) return false;
    if (!states_equal_up_to_phase(a.pre, b.pre, tol)) return false;
    if (a.post.has_value() != b.post.has_value()) return false;
    if (a.post && !states_equal_up_to_phase(*a.post, *b.post, tol)) return false;
    if (!maps_equal(a.observables, b.observables, tol)) return false;
    if (!maps_equal(a.unitaries, b.unitaries, tol)) return false;
    if (a.schedule != b.schedule) return false;
    if (a.pointer_sigma.has_value() != b.pointer_sigma.has_value()) return false;
    if (a.pointer_sigma && std::abs(*a.pointer_sigma - *b.pointer_sigma) > tol) return false;
    if (a.n_particles != b.n_particles) return false;
    return true;
}

} // namespace tsvf
