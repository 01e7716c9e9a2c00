#include <catch2/catch_amalgamated.hpp>

#include "rieszprob/markov.hpp"
#include "rieszprob/processes.hpp"
#include "rieszprob/random_scenarios.hpp"

using namespace rieszprob;

namespace {
Process counterexample_process() {
    // X1 = g, X2 = 0, X3 = g with g not T-measurable.
    auto sp = make_uniform_space(4);
    CondExp t = CondExp::trivial(sp);
    Element g(sp, {Rat(1), Rat(1), Rat(-1), Rat(-1)});
    return Process(t, Element::ones(sp), {1, 2, 3}, {g, Element::zero(sp), g});
}
}  // namespace

TEST_CASE("process validation") {
    auto sp = make_uniform_space(2);
    CondExp t = CondExp::trivial(sp);
    Element e = Element::ones(sp);
    Element x(sp, {Rat(1), Rat(-1)});
    CHECK_THROWS_AS(Process(t, e, {1, 1}, {x, x}), DomainError);
    CHECK_THROWS_AS(Process(t, e, {1}, {x, x}), StructureError);
    CHECK_THROWS_AS(Process(t, Element(sp, {Rat(1), Rat(2)}), {1}, {x}), DomainError);
    Process ok(t, e, {1, 2}, {x, x});
    CHECK(ok.at_time(2) == x);
    CHECK_THROWS_AS(ok.at_time(5), DomainError);
    CHECK_THROWS_AS(is_markov(Process(t, e, {1}, {x})), DomainError);
}

TEST_CASE("history conditional expectations") {
    auto walk = rademacher_walk(2);
    const Process& proc = walk.process;
    // ts = {1}: level sets of the first increment
    CondExp t1 = history_condexp(proc, {1});
    CHECK(t1.partition() == Partition(proc.space(), {{0, 1}, {2, 3}}));
    // empty history returns the base
    CHECK(history_condexp(proc, {}) == proc.base());
    // an element already in R(T) generates nothing
    auto sp = make_uniform_space(4);
    CondExp t = CondExp::trivial(sp);
    Process flat(t, Element::ones(sp), {1, 2}, {Element::ones(sp), Element::zero(sp)});
    CHECK(history_condexp(flat, {1}) == t);
    // jointly separating elements give the identity
    CondExp joint = history_condexp(proc, {1, 2});
    CHECK(joint.matrix() == Matrix::identity(4));
}

TEST_CASE("rademacher walks are Markov") {
    for (std::size_t n = 2; n <= 4; ++n) {
        auto walk = rademacher_walk(n);
        auto eq = markov_equivalence(walk.process);
        CHECK(eq.verdict());
        CHECK(eq.all_agree());
    }
}

TEST_CASE("constant processes are Markov") {
    auto sp = make_uniform_space(4);
    CondExp t = CondExp::trivial(sp);
    Element e = Element::ones(sp);
    Process constant(t, e, {1, 2, 3}, {e, e, e});
    auto eq = markov_equivalence(constant);
    CHECK(eq.verdict());
    CHECK(eq.all_agree());
}

TEST_CASE("the X,0,X process fails every characterization coherently") {
    Process bad = counterexample_process();
    auto eq = markov_equivalence(bad);
    CHECK_FALSE(eq.verdict());
    CHECK(eq.all_agree());

    auto report = is_markov(bad);
    REQUIRE(report.witness.has_value());
    CHECK(report.witness->past == std::vector<int>{1, 2});
    CHECK(report.witness->t == 3);
    auto [lhs, rhs] = reevaluate(bad, *report.witness);
    CHECK(lhs == report.witness->lhs);
    CHECK(rhs == report.witness->rhs);
    CHECK(lhs != rhs);

    auto op_report = markov_operator_form(bad);
    REQUIRE(op_report.witness.has_value());
    auto [ol, orr] = reevaluate(bad, *op_report.witness);
    CHECK(ol != orr);

    CHECK_FALSE(rao_ii(bad, 2, 3));
    CHECK(rao_ii(bad, 1, 2));  // adjacent pair is unconstrained
    auto rao2 = rao_ii_all(bad);
    REQUIRE(rao2.witness.has_value());
    auto [rl, rr] = reevaluate(bad, *rao2.witness);
    CHECK(rl != rr);

    CHECK_FALSE(rao_iii(bad, 2, {1}, {3}));
    auto rao3 = rao_iii_all(bad);
    REQUIRE(rao3.witness.has_value());
    auto [xl, xr] = reevaluate(bad, *rao3.witness);
    CHECK(xl != xr);

    auto fut = future_products(bad);
    CHECK_FALSE(fut.verdict);
    REQUIRE(fut.witness.has_value());
    auto [fl, fr] = reevaluate(bad, *fut.witness);
    CHECK(fl != fr);

    // Chapman-Kolmogorov fails at (1,2,3) for this process.
    CHECK_FALSE(chapman_kolmogorov(bad, 1, 2, 3));

    // Past and future are not conditionally independent on the present.
    PastFutureNote note = past_future_note(bad, 2);
    CHECK_FALSE(note.past_then_future);
    CHECK_FALSE(note.future_then_past);
}

TEST_CASE("processes measurable in R(T) collapse every operator") {
    auto sp = make_uniform_space(4);
    CondExp t(sp, Partition(sp, {{0, 1}, {2, 3}}));
    Element e = Element::ones(sp);
    Element m1(sp, {Rat(2), Rat(2), Rat(0), Rat(0)});
    Element m2(sp, {Rat(1), Rat(1), Rat(3), Rat(3)});
    Process proc(t, e, {1, 2, 3}, {m1, m2, m1});
    auto eq = markov_equivalence(proc);
    CHECK(eq.verdict());
    CHECK(eq.all_agree());
    CHECK(chapman_kolmogorov(proc, 1, 2, 3));
}

TEST_CASE("chapman-kolmogorov on the walk") {
    auto walk = rademacher_walk(3);
    CHECK(chapman_kolmogorov(walk.process, 1, 2, 3));
    CHECK_THROWS_AS(chapman_kolmogorov(walk.process, 2, 2, 3), DomainError);
}

TEST_CASE("rao identities on the walk") {
    auto walk = rademacher_walk(3);
    const Process& proc = walk.process;
    CHECK(rao_ii(proc, 1, 2));
    CHECK(rao_ii(proc, 1, 3));
    CHECK(rao_ii(proc, 2, 3));
    CHECK(rao_iii(proc, 2, {1}, {3}));
    // future subspace inside R(T): trivially independent
    Process with_flat(proc.base(), proc.unit(), {1, 2, 3},
                      {proc.elements()[0], proc.elements()[1], Element::ones(proc.space())});
    CHECK(rao_iii(with_flat, 2, {1}, {3}));

    PastFutureNote note = past_future_note(proc, 2);
    CHECK(note.past_then_future);
    CHECK(note.future_then_past);
}

TEST_CASE("checker agreement on random processes") {
    ScenarioRng rng(8675309);
    for (int round = 0; round < 12; ++round) {
        Process proc = random_process(rng, 6, 3);
        auto eq = markov_equivalence(proc);
        CHECK(eq.all_agree());
        if (!eq.definition.verdict) {
            REQUIRE(eq.definition.witness.has_value());
            auto [lhs, rhs] = reevaluate(proc, *eq.definition.witness);
            CHECK(lhs == eq.definition.witness->lhs);
            CHECK(rhs == eq.definition.witness->rhs);
            CHECK(lhs != rhs);
        } else {
            // Chapman-Kolmogorov holds for every Markov process
            const auto& times = proc.times();
            for (std::size_t i = 0; i < times.size(); ++i)
                for (std::size_t j = i + 1; j < times.size(); ++j)
                    for (std::size_t k = j + 1; k < times.size(); ++k)
                        CHECK(chapman_kolmogorov(proc, times[i], times[j], times[k]));
        }
    }
}

TEST_CASE("band action is f-algebra multiplication by Qe") {
    ScenarioRng rng(1234);
    for (int round = 0; round < 10; ++round) {
        auto sp = random_space(rng, 2 + rng.below(5));
        std::vector<bool> s(sp->size());
        for (std::size_t i = 0; i < sp->size(); ++i) s[i] = rng.below(2);
        BandProjection q(sp, s);
        Element e = Element::ones(sp);
        Element x = random_element(rng, sp);
        CHECK(q.apply(x) == e_mul(q.apply(e), x, e));
    }
}

TEST_CASE("averaging step of the past-future proof") {
    // T_t(Qe * T_tPe) == (T_tQe) * (T_tPe) in the f-algebra of the unit.
    auto walk = rademacher_walk(3);
    const Process& proc = walk.process;
    CondExp t2 = single_time_condexp(proc, 2);
    const Element& e = proc.unit();
    Partition past = history_partition(proc, {1});
    Partition future = history_partition(proc, {3});
    for (const auto& p : enumerate_band_projections(past))
        for (const auto& q : enumerate_band_projections(future)) {
            Element tpe = t2.apply(p.apply(e));
            Element tqe = t2.apply(q.apply(e));
            CHECK(t2.apply(e_mul(q.apply(e), tpe, e)) == e_mul(tqe, tpe, e));
            CHECK(t2.apply(q.apply(tpe)) == e_mul(tpe, tqe, e));
        }
}

TEST_CASE("joint past/future partitions equal products of single times") {
    auto walk = rademacher_walk(4);
    const Process& proc = walk.process;
    Partition joint = history_partition(proc, {1, 2, 3});
    Partition folded = join(join(history_partition(proc, {1}), history_partition(proc, {2})),
                            history_partition(proc, {3}));
    CHECK(joint == folded);
}
