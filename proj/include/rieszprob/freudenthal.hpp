#pragma once

#include <map>
#include <vector>

#include "rieszprob/band.hpp"
#include "rieszprob/condexp.hpp"
#include "rieszprob/element.hpp"
#include "rieszprob/errors.hpp"

namespace rieszprob {

/// One term a * Q(e) of a Freudenthal combination; Q(e) lies in R(T).
struct FreudenthalTerm {
    Rat coefficient;
    BandProjection projection;
};

/// A stage s_n = sum_j a_j Q_j(e), materialized.
struct FreudenthalStage {
    std::vector<FreudenthalTerm> terms;
    Element value;
};

/// Representation of 0 <= w in R(T) as a monotone staircase of band
/// projections applied to the constant-one unit. `exact` marks the one-stage
/// representation that reproduces w exactly (one term per distinct nonzero
/// block value); the dyadic staircase stages are monotone nondecreasing
/// under-approximations with max(w - s_n) <= max(w) * 2^-n.
struct FreudenthalRepresentation {
    Element target;
    std::vector<FreudenthalStage> stages;
    bool exact;

    const Element& final_stage() const { return stages.back().value; }
};

namespace detail {
inline void check_freudenthal_input(const Element& w, const CondExp& t) {
    if (!w.is_nonnegative()) throw DomainError("freudenthal: w has a negative value");
    if (!t.fixes(w)) throw DomainError("freudenthal: w is not in R(T)");
}

inline Element stage_sum(const SpacePtr& space, const std::vector<FreudenthalTerm>& terms) {
    Element e = Element::ones(space);
    Element acc = Element::zero(space);
    for (const auto& term : terms) acc = acc + term.coefficient * term.projection.apply(e);
    return acc;
}
}  // namespace detail

/// Exact mode: w = sum over distinct nonzero block values v of v * Q_v(e),
/// Q_v the projection onto {w == v}. Single stage equal to w; w == 0 yields
/// an empty representation.
inline FreudenthalRepresentation freudenthal_exact(const Element& w, const CondExp& t) {
    detail::check_freudenthal_input(w, t);
    std::map<Rat, std::vector<bool>> level_supports;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0) continue;
        auto [it, fresh] = level_supports.try_emplace(w[i], std::vector<bool>(w.size(), false));
        it->second[i] = true;
    }
    FreudenthalStage stage{{}, Element::zero(w.space())};
    for (auto& [value, support] : level_supports)
        stage.terms.push_back({value, BandProjection(w.space(), support)});
    stage.value = detail::stage_sum(w.space(), stage.terms);
    FreudenthalRepresentation rep{w, {}, true};
    if (!stage.terms.empty()) rep.stages.push_back(std::move(stage));
    return rep;
}

/// Dyadic staircase: at stage n the grid step is max(w) * 2^-n and
/// s_n = sum_j (j * step) * Q_j(e) over the level sets {floor(w/step) == j}.
/// Each Q_j(e) is in R(T) because w is. Stages rise to w with the error
/// bound halving per stage.
inline FreudenthalRepresentation freudenthal_staircase(const Element& w, const CondExp& t,
                                                       unsigned resolution) {
    detail::check_freudenthal_input(w, t);
    FreudenthalRepresentation rep{w, {}, false};
    Rat top = max_value(w);
    if (top == 0) {
        rep.exact = true;  // w == 0: the empty staircase is already exact
        return rep;
    }
    for (unsigned n = 1; n <= resolution; ++n) {
        Rat step = top / Rat(BigInt(1) << n);
        std::map<BigInt, std::vector<bool>> grid_levels;
        for (std::size_t i = 0; i < w.size(); ++i) {
            BigInt j = rat_floor(w[i] / step);
            if (j == 0) continue;
            auto [it, fresh] = grid_levels.try_emplace(j, std::vector<bool>(w.size(), false));
            it->second[i] = true;
        }
        FreudenthalStage stage{{}, Element::zero(w.space())};
        for (auto& [j, support] : grid_levels)
            stage.terms.push_back({Rat(j) * step, BandProjection(w.space(), support)});
        stage.value = detail::stage_sum(w.space(), stage.terms);
        rep.stages.push_back(std::move(stage));
    }
    return rep;
}

}  // namespace rieszprob
