#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "rieszprob/processes.hpp"
#include "rieszprob/scenario.hpp"

namespace rieszprob {

namespace detail {
inline std::vector<Rat> rats(std::initializer_list<int> xs) {
    std::vector<Rat> out;
    out.reserve(xs.size());
    for (int x : xs) out.emplace_back(x);
    return out;
}
}  // namespace detail

/// Two fair coins on four atoms, trivial base: the classical product-measure
/// scenario. Every check passes.
inline Scenario two_coin_scenario() {
    SpacePtr space = make_space({"hh", "ht", "th", "tt"},
                                {Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)});
    Scenario s{kScenarioFormatVersion, "two_coin", space, Partition::trivial(space),
               Element::ones(space), {}, {}, {}, {}};

    s.elements.emplace("coin1", Element(space, detail::rats({1, 1, -1, -1})));
    s.elements.emplace("coin2", Element(space, detail::rats({1, -1, 1, -1})));
    s.elements.emplace("s1", Element(space, detail::rats({1, 1, -1, -1})));
    s.elements.emplace("s2", Element(space, detail::rats({2, 0, 0, -2})));
    s.elements.emplace("f", Element(space, detail::rats({1, 3, 2, 6})));
    s.elements.emplace("w_const", Element(space, detail::rats({3, 3, 3, 3})));
    s.elements.emplace("bound2", Element(space, detail::rats({2, 2, 2, 2})));

    s.partitions.emplace("first", Partition(space, {{0, 1}, {2, 3}}));
    s.partitions.emplace("second", Partition(space, {{0, 2}, {1, 3}}));

    s.processes.emplace("walk", ProcessDef{{1, 2}, {"s1", "s2"}});

    auto add = [&](const char* type, Json params) {
        s.checks.push_back({type, std::move(params)});
    };
    add("verify_axioms", Json::object());
    add("verify_axioms", {{"partition", "first"}});
    add("bands_independent", {{"p", {"hh", "ht"}}, {"q", {"hh", "th"}}});
    add("bands_independent", {{"p", {"hh", "ht"}}, {"q", {"hh", "ht"}}, {"expect", false}});
    add("bands_independent_for_range", {{"p", {"hh", "ht"}}, {"q", {"hh", "th"}}});
    add("subspaces_independent", {{"e1", "first"}, {"e2", "second"}});
    add("subspaces_independent", {{"e1", "first"}, {"e2", "first"}, {"expect", false}});
    add("independent_via_condexp", {{"e1", "first"}, {"e2", "second"}});
    add("independent_via_range_collapse", {{"e1", "first"}, {"e2", "second"}});
    add("equivalence_battery", {{"e1", "first"}, {"e2", "second"}});
    add("equivalence_battery", {{"e1", "first"}, {"e2", "first"}});
    add("independent_wrt_s", {{"s", "first"}, {"e1", "first"}, {"e2", "second"}});
    add("self_independent_matches_blocks", Json::object());
    add("family_independent", {{"parts", {"first", "second"}}});
    add("sequence_independent", {{"elements", {"coin1", "coin2"}}});
    add("oracle_classical_independence", {{"e1", "first"}, {"e2", "second"}});
    add("oracle_classical_independence", {{"e1", "first"}, {"e2", "first"}, {"expect", false}});
    add("oracle_projection_matches", {{"partition", "first"}});
    add("radon_nikodym", {{"f_partition", "first"}, {"element", "f"}});
    add("freudenthal_staircase", {{"element", "w_const"}, {"resolution", 6}});
    add("commutes", {{"p", Json::array()}});
    add("commutes", {{"p", {"hh", "ht"}}, {"expect", false}});
    add("is_markov", {{"process", "walk"}});
    add("markov_battery", {{"process", "walk"}});
    add("is_martingale", {{"process", "walk"}});
    add("brownian", {{"process", "walk"}});
    add("bounded_sums", {{"elements", {"coin1", "coin2"}}, {"bound", "bound2"}});
    return s;
}

/// The X, 0, X counterexample: the middle observation erases the history the
/// end repeats, so every Markov characterization fails (with witnesses) while
/// the characterizations still agree with one another.
inline Scenario non_markov_scenario() {
    SpacePtr space = make_space({"a", "b", "c", "d"},
                                {Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)});
    Scenario s{kScenarioFormatVersion, "non_markov", space, Partition::trivial(space),
               Element::ones(space), {}, {}, {}, {}};
    s.elements.emplace("g", Element(space, detail::rats({1, 1, -1, -1})));
    s.elements.emplace("zero", Element::zero(space));
    s.processes.emplace("bad", ProcessDef{{1, 2, 3}, {"g", "zero", "g"}});

    auto add = [&](const char* type, Json params) {
        s.checks.push_back({type, std::move(params)});
    };
    add("is_markov", {{"process", "bad"}});
    add("markov_operator_form", {{"process", "bad"}});
    add("rao_ii_all", {{"process", "bad"}});
    add("rao_iii_all", {{"process", "bad"}});
    add("future_products", {{"process", "bad"}});
    add("markov_battery", {{"process", "bad"}});
    add("chapman_kolmogorov", {{"process", "bad"}, {"expect", false}});
    return s;
}

/// Rademacher walk demo: the N-step fair sign walk with the full battery.
inline Scenario random_walk_scenario(std::size_t steps) {
    BrownianProcess walk = rademacher_walk(steps);
    const SpacePtr& space = walk.process.space();
    Scenario s{kScenarioFormatVersion, "random_walk_" + std::to_string(steps), space,
               Partition::trivial(space), Element::ones(space), {}, {}, {}, {}};
    ProcessDef def;
    for (std::size_t i = 0; i < steps; ++i) {
        std::string name = "s" + std::to_string(i + 1);
        s.elements.emplace(name, walk.process.elements()[i]);
        def.times.push_back(static_cast<int>(i) + 1);
        def.element_names.push_back(name);
    }
    s.processes.emplace("walk", std::move(def));

    auto add = [&](const char* type, Json params) {
        s.checks.push_back({type, std::move(params)});
    };
    add("brownian", {{"process", "walk"}});
    add("is_markov", {{"process", "walk"}});
    add("markov_battery", {{"process", "walk"}});
    add("is_martingale", {{"process", "walk"}});
    add("chapman_kolmogorov", {{"process", "walk"}});
    add("future_products", {{"process", "walk"}});
    add("past_future_note", {{"process", "walk"}});
    return s;
}

}  // namespace rieszprob
