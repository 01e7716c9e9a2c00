#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "rieszprob/condexp.hpp"
#include "rieszprob/element.hpp"
#include "rieszprob/errors.hpp"
#include "rieszprob/markov.hpp"
#include "rieszprob/partition.hpp"
#include "rieszprob/sample_space.hpp"

namespace rieszprob {

using Json = nlohmann::json;

inline constexpr int kScenarioFormatVersion = 1;

/// A named process definition: parallel time/element-name lists.
struct ProcessDef {
    std::vector<int> times;
    std::vector<std::string> element_names;
};

/// One check descriptor: a type tag plus its raw parameter object, resolved
/// when the suite runs.
struct CheckSpec {
    std::string type;
    Json params;
};

/// A fully resolved scenario: the space, the base partition of T, the unit,
/// named elements/partitions/process definitions, and the checks to run.
/// Scenario files are canonical JSON with exact rational literals; see
/// docs/scenario_format.md for the grammar.
struct Scenario {
    int format_version;
    std::string name;
    SpacePtr space;
    Partition base;
    Element unit;
    std::map<std::string, Element> elements;
    std::map<std::string, Partition> partitions;
    std::map<std::string, ProcessDef> processes;
    std::vector<CheckSpec> checks;

    CondExp base_condexp() const { return CondExp(space, base); }

    Process instantiate(const std::string& process_name) const {
        auto it = processes.find(process_name);
        if (it == processes.end())
            throw ScenarioError("unknown process \"" + process_name + "\"");
        std::vector<Element> xs;
        for (const auto& en : it->second.element_names) xs.push_back(elements.at(en));
        return Process(base_condexp(), unit, it->second.times, std::move(xs));
    }
};

namespace detail {

inline const Json& expect_field(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw ScenarioError("missing field \"" + std::string(key) + "\"", where);
    return *it;
}

inline std::vector<Rat> parse_rational_array(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ScenarioError("expected an array of rational strings", where);
    std::vector<Rat> out;
    out.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_string()) throw ScenarioError("rationals must be strings like \"1/3\"", where);
        try {
            out.push_back(parse_rational(item.get<std::string>()));
        } catch (const DomainError& err) {
            throw ScenarioError(err.what(), where);
        }
    }
    return out;
}

inline Partition parse_partition(const SpacePtr& space, const Json& j, const std::string& where) {
    if (!j.is_array()) throw ScenarioError("expected an array of atom-name blocks", where);
    std::vector<std::vector<std::size_t>> blocks;
    for (const auto& block : j) {
        if (!block.is_array()) throw ScenarioError("expected a block of atom names", where);
        std::vector<std::size_t> atoms;
        for (const auto& atom : block) {
            if (!atom.is_string()) throw ScenarioError("atom names must be strings", where);
            std::size_t idx = space->index_of(atom.get<std::string>());
            if (idx == SampleSpace::npos)
                throw ScenarioError("unknown atom \"" + atom.get<std::string>() + "\"", where);
            atoms.push_back(idx);
        }
        blocks.push_back(std::move(atoms));
    }
    try {
        return Partition(space, std::move(blocks));
    } catch (const Error& err) {
        throw ScenarioError(err.what(), where);
    }
}

/// Reference keys each check type may carry, used for eager name resolution.
struct CheckRefs {
    std::vector<const char*> partition_keys;
    std::vector<const char*> element_keys;
    std::vector<const char*> process_keys;
    std::vector<const char*> element_list_keys;
    std::vector<const char*> partition_list_keys;
    std::vector<const char*> atom_list_keys;
};

inline const std::map<std::string, CheckRefs>& check_registry() {
    static const std::map<std::string, CheckRefs> registry = {
        {"verify_axioms", {{"partition"}, {}, {}, {}, {}, {}}},
        {"bands_independent", {{}, {}, {}, {}, {}, {"p", "q"}}},
        {"bands_independent_for_range", {{}, {}, {}, {}, {}, {"p", "q"}}},
        {"subspaces_independent", {{"e1", "e2"}, {}, {}, {}, {}, {}}},
        {"independent_via_condexp", {{"e1", "e2"}, {}, {}, {}, {}, {}}},
        {"independent_via_range_collapse", {{"e1", "e2"}, {}, {}, {}, {}, {}}},
        {"equivalence_battery", {{"e1", "e2"}, {}, {}, {}, {}, {}}},
        {"independent_wrt_s", {{"s", "e1", "e2"}, {}, {}, {}, {}, {}}},
        {"self_independent_matches_blocks", {{}, {}, {}, {}, {}, {}}},
        {"family_independent", {{}, {}, {}, {}, {"parts"}, {}}},
        {"sequence_independent", {{}, {}, {}, {"elements"}, {}, {}}},
        {"oracle_classical_independence", {{"e1", "e2", "g"}, {}, {}, {}, {}, {}}},
        {"oracle_projection_matches", {{"partition"}, {}, {}, {}, {}, {}}},
        {"radon_nikodym", {{"f_partition"}, {"element"}, {}, {}, {}, {}}},
        {"freudenthal_staircase", {{}, {"element"}, {}, {}, {}, {}}},
        {"commutes", {{}, {}, {}, {}, {}, {"p"}}},
        {"is_markov", {{}, {}, {"process"}, {}, {}, {}}},
        {"markov_operator_form", {{}, {}, {"process"}, {}, {}, {}}},
        {"rao_ii_all", {{}, {}, {"process"}, {}, {}, {}}},
        {"rao_iii_all", {{}, {}, {"process"}, {}, {}, {}}},
        {"future_products", {{}, {}, {"process"}, {}, {}, {}}},
        {"markov_battery", {{}, {}, {"process"}, {}, {}, {}}},
        {"chapman_kolmogorov", {{}, {}, {"process"}, {}, {}, {}}},
        {"past_future_note", {{}, {}, {"process"}, {}, {}, {}}},
        {"is_martingale", {{}, {}, {"process"}, {}, {}, {}}},
        {"bounded_sums", {{}, {"bound"}, {}, {"elements"}, {}, {}}},
        {"brownian", {{}, {}, {"process"}, {}, {}, {}}},
    };
    return registry;
}

inline void validate_check_refs(const Scenario& s, const CheckSpec& check,
                                const std::string& where) {
    auto reg = check_registry().find(check.type);
    if (reg == check_registry().end())
        throw ScenarioError("unknown check type \"" + check.type + "\"", where);
    const CheckRefs& refs = reg->second;
    auto need = [&](const char* key, auto& table, const char* kind) {
        auto it = check.params.find(key);
        if (it == check.params.end()) return;
        if (!it->is_string()) throw ScenarioError("field \"" + std::string(key) + "\" must name a " +
                                                  kind, where);
        if (table.find(it->get<std::string>()) == table.end())
            throw ScenarioError("unresolved " + std::string(kind) + " name \"" +
                                it->get<std::string>() + "\"", where);
    };
    for (const char* key : refs.partition_keys) need(key, s.partitions, "partition");
    for (const char* key : refs.element_keys) need(key, s.elements, "element");
    for (const char* key : refs.process_keys) need(key, s.processes, "process");
    for (const char* key : refs.element_list_keys) {
        auto it = check.params.find(key);
        if (it == check.params.end()) continue;
        if (!it->is_array()) throw ScenarioError("field \"" + std::string(key) +
                                                 "\" must be an array of element names", where);
        for (const auto& name : *it)
            if (!name.is_string() || s.elements.find(name.get<std::string>()) == s.elements.end())
                throw ScenarioError("unresolved element name in \"" + std::string(key) + "\"",
                                    where);
    }
    for (const char* key : refs.partition_list_keys) {
        auto it = check.params.find(key);
        if (it == check.params.end()) continue;
        if (!it->is_array()) throw ScenarioError("field \"" + std::string(key) +
                                                 "\" must be an array of partition names", where);
        for (const auto& name : *it)
            if (!name.is_string() ||
                s.partitions.find(name.get<std::string>()) == s.partitions.end())
                throw ScenarioError("unresolved partition name in \"" + std::string(key) + "\"",
                                    where);
    }
    for (const char* key : refs.atom_list_keys) {
        auto it = check.params.find(key);
        if (it == check.params.end()) continue;
        if (!it->is_array()) throw ScenarioError("field \"" + std::string(key) +
                                                 "\" must be an array of atom names", where);
        for (const auto& name : *it)
            if (!name.is_string() ||
                s.space->index_of(name.get<std::string>()) == SampleSpace::npos)
                throw ScenarioError("unresolved atom name in \"" + std::string(key) + "\"", where);
    }
}

}  // namespace detail

/// Parses and fully resolves a scenario. Parse failures, unresolved names
/// and invariant violations surface as distinct ScenarioError messages with
/// a location.
inline Scenario load_scenario(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& err) {
        throw ScenarioError(std::string("JSON parse error: ") + err.what(), "input");
    }
    if (!j.is_object()) throw ScenarioError("scenario must be a JSON object", "input");

    const Json& version = detail::expect_field(j, "format_version", "scenario");
    if (!version.is_number_integer() || version.get<int>() != kScenarioFormatVersion)
        throw ScenarioError("unsupported format_version", "scenario");

    const Json& jspace = detail::expect_field(j, "space", "scenario");
    const Json& jatoms = detail::expect_field(jspace, "atoms", "space");
    if (!jatoms.is_array()) throw ScenarioError("atoms must be an array of strings", "space");
    std::vector<std::string> atoms;
    for (const auto& a : jatoms) {
        if (!a.is_string()) throw ScenarioError("atoms must be strings", "space.atoms");
        atoms.push_back(a.get<std::string>());
    }
    std::vector<Rat> weights = detail::parse_rational_array(
        detail::expect_field(jspace, "weights", "space"), "space.weights");
    SpacePtr space;
    try {
        space = make_space(std::move(atoms), std::move(weights));
    } catch (const Error& err) {
        throw ScenarioError(err.what(), "space");
    }

    Partition base = j.contains("base_partition")
                         ? detail::parse_partition(space, j["base_partition"], "base_partition")
                         : Partition::trivial(space);

    Element unit = Element::ones(space);
    if (j.contains("unit")) {
        std::vector<Rat> uv = detail::parse_rational_array(j["unit"], "unit");
        try {
            unit = Element(space, std::move(uv));
        } catch (const Error& err) {
            throw ScenarioError(err.what(), "unit");
        }
        if (!unit.is_nonnegative() || !unit.is_strictly_positive())
            throw ScenarioError("unit is not strictly positive", "unit");
        if (CondExp(space, base).apply(unit) != unit)
            throw ScenarioError("unit is not invariant under the base conditional expectation",
                                "unit");
    }

    Scenario s{kScenarioFormatVersion,
               j.value("name", std::string{}),
               space,
               std::move(base),
               std::move(unit),
               {},
               {},
               {},
               {}};

    if (j.contains("elements")) {
        if (!j["elements"].is_object())
            throw ScenarioError("elements must be an object", "elements");
        for (const auto& [name, values] : j["elements"].items()) {
            std::vector<Rat> v = detail::parse_rational_array(values, "elements." + name);
            try {
                s.elements.emplace(name, Element(space, std::move(v)));
            } catch (const Error& err) {
                throw ScenarioError(err.what(), "elements." + name);
            }
        }
    }
    if (j.contains("partitions")) {
        if (!j["partitions"].is_object())
            throw ScenarioError("partitions must be an object", "partitions");
        for (const auto& [name, blocks] : j["partitions"].items())
            s.partitions.emplace(name,
                                 detail::parse_partition(space, blocks, "partitions." + name));
    }
    if (j.contains("processes")) {
        if (!j["processes"].is_object())
            throw ScenarioError("processes must be an object", "processes");
        for (const auto& [name, def] : j["processes"].items()) {
            const std::string where = "processes." + name;
            const Json& jtimes = detail::expect_field(def, "times", where);
            const Json& jels = detail::expect_field(def, "elements", where);
            if (!jtimes.is_array() || !jels.is_array() || jtimes.size() != jels.size())
                throw ScenarioError("times and elements must be arrays of equal length", where);
            ProcessDef pd;
            for (const auto& t : jtimes) {
                if (!t.is_number_integer()) throw ScenarioError("times must be integers", where);
                pd.times.push_back(t.get<int>());
            }
            for (std::size_t i = 1; i < pd.times.size(); ++i)
                if (pd.times[i] <= pd.times[i - 1])
                    throw ScenarioError("times must be strictly increasing", where);
            for (const auto& en : jels) {
                if (!en.is_string() ||
                    s.elements.find(en.get<std::string>()) == s.elements.end())
                    throw ScenarioError("unresolved element name in process", where);
                pd.element_names.push_back(en.get<std::string>());
            }
            s.processes.emplace(name, std::move(pd));
        }
    }
    if (j.contains("checks")) {
        if (!j["checks"].is_array()) throw ScenarioError("checks must be an array", "checks");
        std::size_t index = 0;
        for (const auto& jc : j["checks"]) {
            const std::string where = "checks[" + std::to_string(index) + "]";
            if (!jc.is_object()) throw ScenarioError("check must be an object", where);
            CheckSpec check;
            check.type = detail::expect_field(jc, "type", where).get<std::string>();
            check.params = jc;
            check.params.erase("type");
            detail::validate_check_refs(s, check, where);
            s.checks.push_back(std::move(check));
            ++index;
        }
    }
    return s;
}

/// Canonical serialization: sorted keys, exact rational strings. Loading the
/// output yields a semantically identical scenario.
inline std::string serialize(const Scenario& s) {
    Json j;
    j["format_version"] = s.format_version;
    if (!s.name.empty()) j["name"] = s.name;
    Json jspace;
    jspace["atoms"] = s.space->atoms();
    std::vector<std::string> weights;
    for (const Rat& w : s.space->weights()) weights.push_back(rat_to_string(w));
    jspace["weights"] = weights;
    j["space"] = std::move(jspace);

    auto partition_json = [&](const Partition& p) {
        Json blocks = Json::array();
        for (const auto& block : p.blocks()) {
            Json names = Json::array();
            for (std::size_t atom : block) names.push_back(s.space->atom(atom));
            blocks.push_back(std::move(names));
        }
        return blocks;
    };
    j["base_partition"] = partition_json(s.base);

    std::vector<std::string> unit_values;
    for (const Rat& v : s.unit.values()) unit_values.push_back(rat_to_string(v));
    j["unit"] = unit_values;

    if (!s.elements.empty()) {
        Json je = Json::object();
        for (const auto& [name, el] : s.elements) {
            std::vector<std::string> values;
            for (const Rat& v : el.values()) values.push_back(rat_to_string(v));
            je[name] = values;
        }
        j["elements"] = std::move(je);
    }
    if (!s.partitions.empty()) {
        Json jp = Json::object();
        for (const auto& [name, p] : s.partitions) jp[name] = partition_json(p);
        j["partitions"] = std::move(jp);
    }
    if (!s.processes.empty()) {
        Json jp = Json::object();
        for (const auto& [name, pd] : s.processes) {
            Json def;
            def["times"] = pd.times;
            def["elements"] = pd.element_names;
            jp[name] = std::move(def);
        }
        j["processes"] = std::move(jp);
    }
    if (!s.checks.empty()) {
        Json jc = Json::array();
        for (const auto& check : s.checks) {
            Json item = check.params;
            item["type"] = check.type;
            jc.push_back(std::move(item));
        }
        j["checks"] = std::move(jc);
    }
    return j.dump(2) + "\n";
}

}  // namespace rieszprob
