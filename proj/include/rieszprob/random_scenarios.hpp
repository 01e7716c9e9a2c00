#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rieszprob/condexp.hpp"
#include "rieszprob/element.hpp"
#include "rieszprob/markov.hpp"
#include "rieszprob/partition.hpp"
#include "rieszprob/processes.hpp"
#include "rieszprob/sample_space.hpp"

namespace rieszprob {

/// Seeded generator for randomized equivalence batteries. Draws raw engine
/// output with modulo reduction instead of std distributions, so identical
/// seeds produce identical scenarios on every platform; the seed is recorded
/// wherever the scenarios are consumed.
class ScenarioRng {
public:
    explicit ScenarioRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }
    std::size_t below(std::size_t n) { return n <= 1 ? 0 : raw() % n; }
    int int_in(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }

private:
    std::mt19937_64 gen_;
};

/// Space with 'atoms' atoms and weights k_i / sum(k), k_i in 1..9.
inline SpacePtr random_space(ScenarioRng& rng, std::size_t atoms) {
    std::vector<int> ticks(atoms);
    int total = 0;
    for (auto& k : ticks) total += (k = rng.int_in(1, 9));
    std::vector<std::string> names;
    std::vector<Rat> weights;
    for (std::size_t i = 0; i < atoms; ++i) {
        names.push_back("w" + std::to_string(i));
        weights.emplace_back(ticks[i], total);
    }
    return make_space(std::move(names), std::move(weights));
}

/// Random partition with at most max_blocks blocks (random labeling).
inline Partition random_partition(ScenarioRng& rng, const SpacePtr& space,
                                  std::size_t max_blocks) {
    std::vector<std::size_t> labels(space->size());
    for (auto& l : labels) l = rng.below(max_blocks);
    return Partition::from_labels(space, labels);
}

/// Random partition refining `base` with at most max_blocks blocks; falls
/// back to `base` itself when the draw keeps exceeding the cap.
inline Partition random_refining_partition(ScenarioRng& rng, const Partition& base,
                                           std::size_t max_blocks) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        std::size_t split = 1 + rng.below(3);
        Partition candidate = join(base, random_partition(rng, base.space(), split + 1));
        if (candidate.block_count() <= max_blocks) return candidate;
    }
    return base;
}

/// Random element with small rational values p/q, p in [-4,4], q in {1,2,3}.
inline Element random_element(ScenarioRng& rng, const SpacePtr& space) {
    std::vector<Rat> values;
    values.reserve(space->size());
    for (std::size_t i = 0; i < space->size(); ++i)
        values.emplace_back(rng.int_in(-4, 4), rng.int_in(1, 3));
    return Element(space, std::move(values));
}

/// Strictly positive T-invariant units: constant on every base block, values
/// drawn from a small positive pool. The first unit is always the constant
/// one; the rest differ from it unless the pool collapses.
inline std::vector<Element> random_invariant_units(ScenarioRng& rng, const Partition& base,
                                                   std::size_t count) {
    static const Rat pool[] = {Rat(1), Rat(2), Rat(3), Rat(1, 2), Rat(1, 3), Rat(5, 2), Rat(4)};
    std::vector<Element> units;
    units.push_back(Element::ones(base.space()));
    while (units.size() < count) {
        std::vector<Rat> values(base.space()->size());
        for (const auto& block : base.blocks()) {
            const Rat& v = pool[rng.below(std::size(pool))];
            for (std::size_t atom : block) values[atom] = v;
        }
        Element candidate(base.space(), std::move(values));
        bool fresh = true;
        for (const auto& u : units)
            if (u == candidate) fresh = false;
        if (fresh || base.block_count() == 1) {
            // On a trivial base the only invariant units are global constants;
            // accept scaled copies rather than spin.
            if (!fresh) candidate = Rat(2 + units.size()) * Element::ones(base.space());
            units.push_back(std::move(candidate));
        }
    }
    return units;
}

/// One randomized independence scenario: a base partition for T and two
/// subspaces refining it, block counts within the given cap.
struct IndependenceScenario {
    SpacePtr space;
    Partition base;
    Partition e1, e2;
};

inline IndependenceScenario random_independence_scenario(ScenarioRng& rng, std::size_t max_atoms,
                                                         std::size_t max_blocks) {
    std::size_t atoms = 2 + rng.below(max_atoms - 1);
    SpacePtr space = random_space(rng, atoms);
    Partition base = random_partition(rng, space, 1 + rng.below(3));
    Partition e1 = random_refining_partition(rng, base, max_blocks);
    Partition e2 = random_refining_partition(rng, base, max_blocks);
    return {space, std::move(base), std::move(e1), std::move(e2)};
}

/// Random process over a fresh space: random elements at times 1..n_times,
/// trivial base. Mostly non-Markov; used for checker-agreement batteries.
inline Process random_process(ScenarioRng& rng, std::size_t max_atoms, std::size_t n_times) {
    std::size_t atoms = 2 + rng.below(max_atoms - 1);
    SpacePtr space = random_space(rng, atoms);
    CondExp t = CondExp::trivial(space);
    std::vector<int> times;
    std::vector<Element> xs;
    for (std::size_t i = 0; i < n_times; ++i) {
        times.push_back(static_cast<int>(i) + 1);
        xs.push_back(random_element(rng, space));
    }
    return Process(std::move(t), Element::ones(space), std::move(times), std::move(xs));
}

/// Random product space with 2..max_factors factors of 2..3 outcomes each,
/// values distinct small integers, weights k/total. Coordinates are
/// independent by construction.
inline ProductSpace random_product_space(ScenarioRng& rng, std::size_t max_factors) {
    std::size_t n_factors = 2 + rng.below(max_factors - 1);
    std::vector<std::vector<FactorOutcome>> factors;
    for (std::size_t k = 0; k < n_factors; ++k) {
        std::size_t outcomes = 2 + rng.below(2);
        std::vector<int> ticks(outcomes);
        int total = 0;
        for (auto& tick : ticks) total += (tick = rng.int_in(1, 4));
        std::vector<FactorOutcome> factor;
        for (std::size_t o = 0; o < outcomes; ++o)
            factor.push_back({Rat(static_cast<int>(o) * 2) - Rat(1), Rat(ticks[o], total)});
        factors.push_back(std::move(factor));
    }
    return product_space(factors);
}

}  // namespace rieszprob
