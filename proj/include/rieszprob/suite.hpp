#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rieszprob/freudenthal.hpp"
#include "rieszprob/independence.hpp"
#include "rieszprob/markov.hpp"
#include "rieszprob/oracles.hpp"
#include "rieszprob/processes.hpp"
#include "rieszprob/scenario.hpp"

namespace rieszprob {

struct SuiteOptions {
    std::size_t cap_blocks = kIndependenceEnumCap;
    bool timings = true;
};

struct CheckResult {
    std::size_t index = 0;
    std::string type;
    Json params;
    std::string status;  // pass | fail | error | cap
    std::optional<bool> verdict;
    std::optional<bool> expect;
    std::string detail;
    Json witness;  // null unless a failure carries one
    double time_ms = 0.0;
};

/// Deterministic, machine-readable outcome of running a scenario's checks.
/// With timings suppressed, identical scenario text yields byte-identical
/// serialized reports.
struct SuiteReport {
    std::string scenario_name;
    std::size_t atom_count = 0;
    bool timings = true;
    std::vector<CheckResult> checks;
    std::size_t passed = 0, failed = 0, errors = 0, capped = 0;

    int exit_code() const {
        if (capped > 0) return 3;
        if (failed > 0 || errors > 0) return 1;
        return 0;
    }

    Json to_json() const {
        Json j;
        j["scenario"] = scenario_name;
        j["atoms"] = atom_count;
        Json jc = Json::array();
        for (const auto& c : checks) {
            Json item;
            item["index"] = c.index;
            item["type"] = c.type;
            item["params"] = c.params;
            item["status"] = c.status;
            item["verdict"] = c.verdict ? Json(*c.verdict) : Json(nullptr);
            item["expect"] = c.expect ? Json(*c.expect) : Json(nullptr);
            if (!c.detail.empty()) item["detail"] = c.detail;
            item["witness"] = c.witness;
            if (timings) item["time_ms"] = std::round(c.time_ms * 1000.0) / 1000.0;
            jc.push_back(std::move(item));
        }
        j["checks"] = std::move(jc);
        Json summary;
        summary["pass"] = passed;
        summary["fail"] = failed;
        summary["error"] = errors;
        summary["cap"] = capped;
        summary["total"] = checks.size();
        j["summary"] = std::move(summary);
        return j;
    }

    std::string to_text() const {
        std::ostringstream out;
        out << "scenario " << (scenario_name.empty() ? "(unnamed)" : scenario_name) << " ("
            << atom_count << " atoms, " << checks.size() << " checks)\n";
        for (const auto& c : checks) {
            out << "[" << c.index + 1 << "] " << c.status << "  " << c.type;
            for (const auto& [key, value] : c.params.items()) {
                if (value.is_string())
                    out << " " << key << "=" << value.get<std::string>();
                else if (value.is_boolean() || value.is_number())
                    out << " " << key << "=" << value.dump();
            }
            if (c.verdict) out << " verdict=" << (*c.verdict ? "true" : "false");
            if (c.expect && (!c.verdict || *c.expect != *c.verdict))
                out << " expect=" << (*c.expect ? "true" : "false");
            if (timings) out << " (" << std::round(c.time_ms * 1000.0) / 1000.0 << " ms)";
            out << "\n";
            if (!c.detail.empty()) out << "      " << c.detail << "\n";
            if (!c.witness.is_null()) out << "      witness: " << c.witness.dump() << "\n";
        }
        out << "summary: " << passed << " passed, " << failed << " failed, " << errors
            << " errors, " << capped << " capped\n";
        return out.str();
    }
};

/// Rebuilds a report from its structured serialization, for re-rendering.
inline SuiteReport suite_report_from_json(const Json& j) {
    SuiteReport report;
    report.scenario_name = j.value("scenario", std::string{});
    report.atom_count = j.value("atoms", std::size_t{0});
    report.timings = false;
    for (const auto& jc : j.at("checks")) {
        CheckResult c;
        c.index = jc.at("index").get<std::size_t>();
        c.type = jc.at("type").get<std::string>();
        c.params = jc.value("params", Json::object());
        c.status = jc.at("status").get<std::string>();
        if (jc.contains("verdict") && !jc["verdict"].is_null()) c.verdict = jc["verdict"].get<bool>();
        if (jc.contains("expect") && !jc["expect"].is_null()) c.expect = jc["expect"].get<bool>();
        c.detail = jc.value("detail", std::string{});
        c.witness = jc.value("witness", Json(nullptr));
        if (jc.contains("time_ms")) {
            c.time_ms = jc["time_ms"].get<double>();
            report.timings = true;
        }
        if (c.status == "pass")
            ++report.passed;
        else if (c.status == "fail")
            ++report.failed;
        else if (c.status == "cap")
            ++report.capped;
        else
            ++report.errors;
        report.checks.push_back(std::move(c));
    }
    return report;
}

namespace detail {

inline Json element_json(const Element& f) {
    Json out = Json::array();
    for (const Rat& v : f.values()) out.push_back(rat_to_string(v));
    return out;
}

inline Json support_json(const BandProjection& p) {
    Json out = Json::array();
    for (const auto& name : p.support_atoms()) out.push_back(name);
    return out;
}

inline Json witness_json(const IndependenceWitness& w) {
    Json j;
    j["p_support"] = support_json(w.p);
    j["q_support"] = support_json(w.q);
    j["eval"] = element_json(w.eval);
    j["tptq"] = element_json(w.tptq);
    j["tpq"] = element_json(w.tpq);
    j["tqtp"] = element_json(w.tqtp);
    if (!w.context.empty()) j["context"] = w.context;
    return j;
}

inline Json witness_json(const MarkovWitness& w) {
    Json j;
    j["identity"] = to_string(w.identity);
    j["past"] = w.past;
    j["t"] = w.t;
    if (!w.future.empty()) j["future"] = w.future;
    if (w.p) j["p_support"] = support_json(*w.p);
    if (w.q) j["q_support"] = support_json(*w.q);
    j["lhs"] = element_json(w.lhs);
    j["rhs"] = element_json(w.rhs);
    return j;
}

inline BandProjection projection_from_atoms(const Scenario& s, const Json& names) {
    std::vector<bool> support(s.space->size(), false);
    for (const auto& name : names) support[s.space->index_of(name.get<std::string>())] = true;
    return BandProjection(s.space, std::move(support));
}

struct CheckOutcome {
    bool verdict = false;
    std::string detail;
    Json witness;
};

inline CheckOutcome run_one_check(const Scenario& s, const CheckSpec& check,
                                  const SuiteOptions& options) {
    const CondExp t = s.base_condexp();
    const Json& p = check.params;
    CheckOutcome out;
    out.witness = nullptr;

    auto partition_or_base = [&](const char* key) -> const Partition& {
        if (p.contains(key)) return s.partitions.at(p[key].get<std::string>());
        return s.base;
    };
    auto record = [&](const IndependenceVerdict& v) {
        out.verdict = v.holds;
        if (v.witness) out.witness = witness_json(*v.witness);
    };
    auto record_markov = [&](const MarkovReport& r) {
        out.verdict = r.verdict;
        if (r.witness) out.witness = witness_json(*r.witness);
    };

    if (check.type == "verify_axioms") {
        Partition part = partition_or_base("partition");
        AxiomReport report = verify_axioms(CondExp(s.space, part).matrix(), s.space);
        out.verdict = report.ok();
        std::string notes = "order continuity: ";
        notes += AxiomReport::order_continuity;
        notes += report.strictly_positive ? "; strictly positive" : "; not strictly positive";
        for (const auto& failure : report.failures) notes += "; failed: " + failure;
        out.detail = notes;
    } else if (check.type == "bands_independent") {
        record(bands_independent(t, projection_from_atoms(s, p.at("p")),
                                 projection_from_atoms(s, p.at("q")), s.unit));
    } else if (check.type == "bands_independent_for_range") {
        BandProjection bp = projection_from_atoms(s, p.at("p"));
        BandProjection bq = projection_from_atoms(s, p.at("q"));
        IndependenceVerdict range_form = bands_independent_for_range(t, bp, bq);
        IndependenceVerdict unit_form = bands_independent(t, bp, bq, s.unit);
        if (range_form.holds != unit_form.holds)
            throw Error("range-form and unit-form verdicts disagree");
        record(range_form);
        out.detail = "agrees with the single-unit form";
    } else if (check.type == "subspaces_independent") {
        record(subspaces_independent(t, s.partitions.at(p.at("e1").get<std::string>()),
                                     s.partitions.at(p.at("e2").get<std::string>()), s.unit,
                                     options.cap_blocks));
    } else if (check.type == "independent_via_condexp") {
        record(independent_via_condexp(t, s.partitions.at(p.at("e1").get<std::string>()),
                                       s.partitions.at(p.at("e2").get<std::string>()),
                                       options.cap_blocks));
    } else if (check.type == "independent_via_range_collapse") {
        record(independent_via_range_collapse(t, s.partitions.at(p.at("e1").get<std::string>()),
                                              s.partitions.at(p.at("e2").get<std::string>()),
                                              options.cap_blocks));
    } else if (check.type == "equivalence_battery") {
        const Partition& e1 = s.partitions.at(p.at("e1").get<std::string>());
        const Partition& e2 = s.partitions.at(p.at("e2").get<std::string>());
        bool a = subspaces_independent(t, e1, e2, s.unit, options.cap_blocks).holds;
        bool b = independent_via_condexp(t, e1, e2, options.cap_blocks).holds;
        bool c = independent_via_range_collapse(t, e1, e2, options.cap_blocks).holds;
        bool d = oracle::classical_independence(s.space, e1, e2, s.base, options.cap_blocks);
        out.verdict = (a == b && b == c && c == d);
        out.detail = std::string("subspaces=") + (a ? "true" : "false") +
                     " condexp=" + (b ? "true" : "false") +
                     " range_collapse=" + (c ? "true" : "false") +
                     " classical_oracle=" + (d ? "true" : "false");
    } else if (check.type == "independent_wrt_s") {
        CondExp cs(s.space, s.partitions.at(p.at("s").get<std::string>()));
        record(independent_wrt_s(t, cs, s.partitions.at(p.at("e1").get<std::string>()),
                                 s.partitions.at(p.at("e2").get<std::string>()),
                                 options.cap_blocks));
    } else if (check.type == "self_independent_matches_blocks") {
        auto found = self_independent_projections(t, s.unit);
        auto expected = enumerate_band_projections(t.partition());
        bool equal = found.size() == expected.size();
        if (equal)
            for (const auto& q : expected) {
                bool hit = false;
                for (const auto& f : found)
                    if (f == q) {
                        hit = true;
                        break;
                    }
                if (!hit) {
                    equal = false;
                    break;
                }
            }
        out.verdict = equal;
        out.detail = std::to_string(found.size()) + " self-independent projections, " +
                     std::to_string(expected.size()) + " unions of T-blocks";
    } else if (check.type == "family_independent") {
        std::vector<Partition> parts;
        for (const auto& name : p.at("parts"))
            parts.push_back(s.partitions.at(name.get<std::string>()));
        record(family_independent(t, parts, p.value("max_pair_size", kDefaultPairSize),
                                  std::max(parts.size(), kFamilyCap), options.cap_blocks));
    } else if (check.type == "sequence_independent") {
        std::vector<Element> fs;
        for (const auto& name : p.at("elements")) fs.push_back(s.elements.at(name.get<std::string>()));
        record(sequence_independent(t, fs, p.value("max_pair_size", kDefaultPairSize),
                                    std::max(fs.size(), kFamilyCap), options.cap_blocks));
    } else if (check.type == "oracle_classical_independence") {
        const Partition& g = p.contains("g") ? s.partitions.at(p.at("g").get<std::string>())
                                             : s.base;
        out.verdict = oracle::classical_independence(
            s.space, s.partitions.at(p.at("e1").get<std::string>()),
            s.partitions.at(p.at("e2").get<std::string>()), g, options.cap_blocks);
    } else if (check.type == "oracle_projection_matches") {
        Partition part = partition_or_base("partition");
        out.verdict = (oracle::projection_matrix(s.space, part) ==
                       CondExp(s.space, part).matrix());
    } else if (check.type == "radon_nikodym") {
        const Partition& f_part = s.partitions.at(p.at("f_partition").get<std::string>());
        const Element& f = s.elements.at(p.at("element").get<std::string>());
        CondExp t_f = condexp_onto(t, f_part);
        bool identity = verify_radon_nikodym(t, t_f, f);
        RadonNikodymSolve solve = radon_nikodym_solve(t, f_part, f);
        bool unique_and_matches = solve.unique && solve.solution == t_f.apply(f);
        out.verdict = identity && unique_and_matches;
        out.detail = std::string("identity=") + (identity ? "true" : "false") +
                     " unique_solution=" + (solve.unique ? "true" : "false");
    } else if (check.type == "freudenthal_staircase") {
        const Element& w = s.elements.at(p.at("element").get<std::string>());
        unsigned resolution = p.value("resolution", 8u);
        auto rep = freudenthal_staircase(w, t, resolution);
        bool ok = true;
        Element previous = Element::zero(s.space);
        for (const auto& stage : rep.stages) {
            if (!leq(previous, stage.value) || !leq(stage.value, w)) ok = false;
            previous = stage.value;
        }
        if (!rep.stages.empty()) {
            Rat bound = max_value(w) / Rat(BigInt(1) << resolution);
            if (!leq(w - rep.final_stage(), Element::constant(s.space, bound))) ok = false;
        }
        auto exact = freudenthal_exact(w, t);
        if (!exact.stages.empty() && exact.final_stage() != w) ok = false;
        if (exact.stages.empty() && !w.is_zero()) ok = false;
        out.verdict = ok;
    } else if (check.type == "commutes") {
        BandProjection bp = projection_from_atoms(s, p.at("p"));
        bool matrix_form = commutes(t, bp);
        bool support_form = t.partition().is_union_of_blocks(bp.support());
        if (matrix_form != support_form)
            throw Error("commutation matrix form disagrees with support form");
        out.verdict = matrix_form;
    } else if (check.type == "is_markov") {
        record_markov(is_markov(s.instantiate(p.at("process").get<std::string>())));
    } else if (check.type == "markov_operator_form") {
        record_markov(markov_operator_form(s.instantiate(p.at("process").get<std::string>())));
    } else if (check.type == "rao_ii_all") {
        record_markov(rao_ii_all(s.instantiate(p.at("process").get<std::string>())));
    } else if (check.type == "rao_iii_all") {
        record_markov(rao_iii_all(s.instantiate(p.at("process").get<std::string>())));
    } else if (check.type == "future_products") {
        record_markov(future_products(s.instantiate(p.at("process").get<std::string>())));
    } else if (check.type == "markov_battery") {
        Process proc = s.instantiate(p.at("process").get<std::string>());
        MarkovEquivalence eq = markov_equivalence(proc);
        out.verdict = eq.all_agree();
        out.detail = std::string("definition=") + (eq.definition.verdict ? "true" : "false") +
                     " operator_form=" + (eq.operator_form.verdict ? "true" : "false") +
                     " rao_ii=" + (eq.rao2.verdict ? "true" : "false") +
                     " rao_iii=" + (eq.rao3.verdict ? "true" : "false");
        if (!eq.definition.verdict && eq.definition.witness)
            out.witness = witness_json(*eq.definition.witness);
    } else if (check.type == "chapman_kolmogorov") {
        Process proc = s.instantiate(p.at("process").get<std::string>());
        bool all = true;
        const auto& times = proc.times();
        for (std::size_t i = 0; all && i < times.size(); ++i)
            for (std::size_t j = i + 1; all && j < times.size(); ++j)
                for (std::size_t k = j + 1; all && k < times.size(); ++k)
                    all = chapman_kolmogorov(proc, times[i], times[j], times[k]);
        out.verdict = all;
    } else if (check.type == "past_future_note") {
        Process proc = s.instantiate(p.at("process").get<std::string>());
        bool all = true;
        std::string detail;
        for (std::size_t i = 1; i + 1 < proc.times().size(); ++i) {
            PastFutureNote note = past_future_note(proc, proc.times()[i]);
            all = all && note.past_then_future && note.future_then_past;
            detail += "t=" + std::to_string(proc.times()[i]) + ": TS" +
                      (note.past_then_future ? "=" : "!=") + "T_t ST" +
                      (note.future_then_past ? "=" : "!=") + "T_t; ";
        }
        out.verdict = all;
        out.detail = detail;
    } else if (check.type == "is_martingale") {
        Process proc = s.instantiate(p.at("process").get<std::string>());
        MartingaleReport report = is_martingale(proc);
        out.verdict = report.holds;
        if (report.witness) {
            Json w;
            w["i"] = report.witness->i;
            w["j"] = report.witness->j;
            w["lhs"] = element_json(report.witness->lhs);
            w["rhs"] = element_json(report.witness->rhs);
            out.witness = std::move(w);
        }
    } else if (check.type == "bounded_sums") {
        std::vector<Element> fs;
        for (const auto& name : p.at("elements")) fs.push_back(s.elements.at(name.get<std::string>()));
        const Element& bound = s.elements.at(p.at("bound").get<std::string>());
        std::size_t horizon = p.value("horizon", fs.size());
        BoundedSumReport report = bounded_sum_check(fs, t, bound, horizon);
        out.verdict = report.bounded();
        out.detail = std::string("mean-zero hypothesis ") +
                     (report.mean_zero_hypothesis ? "holds" : "violated");
        if (report.first_violation)
            out.detail += "; bound first violated at n=" + std::to_string(*report.first_violation);
    } else if (check.type == "brownian") {
        Process proc = s.instantiate(p.at("process").get<std::string>());
        std::vector<Element> increments;
        Element previous = Element::zero(s.space);
        for (const auto& x : proc.elements()) {
            increments.push_back(x - previous);
            previous = x;
        }
        BrownianProcess bp{proc, std::move(increments)};
        BrownianReport report = verify_brownian(bp);
        out.verdict = report.ok();
        std::string detail = std::string("increments independent: ") +
                             (report.increments_independent.holds ? "true" : "false");
        if (!report.mean_failures.empty())
            detail += "; nonzero mean at increment " + std::to_string(report.mean_failures[0]);
        if (!report.variance_failures.empty())
            detail += "; variance axiom fails at (n,m)=(" +
                      std::to_string(report.variance_failures[0].n) + "," +
                      std::to_string(report.variance_failures[0].m) + ")";
        out.detail = detail;
        if (!report.increments_independent.holds && report.increments_independent.witness)
            out.witness = witness_json(*report.increments_independent.witness);
        else if (!report.variance_failures.empty()) {
            Json w;
            w["n"] = report.variance_failures[0].n;
            w["m"] = report.variance_failures[0].m;
            w["lhs"] = element_json(report.variance_failures[0].lhs);
            w["rhs"] = element_json(report.variance_failures[0].rhs);
            out.witness = std::move(w);
        }
    } else {
        throw ScenarioError("unknown check type \"" + check.type + "\"");
    }
    return out;
}

}  // namespace detail

/// Runs every check in order, capturing per-check verdicts, witnesses and
/// errors; a check that throws never aborts the suite. A check passes when
/// its verdict equals its "expect" parameter (default true).
inline SuiteReport run_suite(const Scenario& s, const SuiteOptions& options = {}) {
    SuiteReport report;
    report.scenario_name = s.name;
    report.atom_count = s.space->size();
    report.timings = options.timings;
    std::size_t index = 0;
    for (const auto& check : s.checks) {
        CheckResult result;
        result.index = index++;
        result.type = check.type;
        result.params = check.params;
        result.witness = nullptr;
        bool expect = check.params.value("expect", true);
        result.expect = expect;
        auto start = std::chrono::steady_clock::now();
        try {
            detail::CheckOutcome outcome = detail::run_one_check(s, check, options);
            result.verdict = outcome.verdict;
            result.detail = std::move(outcome.detail);
            result.witness = std::move(outcome.witness);
            result.status = (outcome.verdict == expect) ? "pass" : "fail";
        } catch (const CapError& err) {
            result.status = "cap";
            result.detail = err.what();
        } catch (const std::exception& err) {
            result.status = "error";
            result.detail = err.what();
        }
        auto stop = std::chrono::steady_clock::now();
        result.time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        if (result.status == "pass")
            ++report.passed;
        else if (result.status == "fail")
            ++report.failed;
        else if (result.status == "cap")
            ++report.capped;
        else
            ++report.errors;
        report.checks.push_back(std::move(result));
    }
    return report;
}

}  // namespace rieszprob
