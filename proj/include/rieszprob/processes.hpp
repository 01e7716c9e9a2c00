#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rieszprob/condexp.hpp"
#include "rieszprob/element.hpp"
#include "rieszprob/errors.hpp"
#include "rieszprob/independence.hpp"
#include "rieszprob/markov.hpp"
#include "rieszprob/partition.hpp"
#include "rieszprob/sample_space.hpp"

namespace rieszprob {

/// One outcome of a factor: a value and its probability mass.
struct FactorOutcome {
    Rat value;
    Rat weight;
};

/// A finite product probability space with its coordinate elements. The
/// canonical source of independent sequences: coordinate k depends only on
/// factor k, and the coordinates are T-conditionally independent with
/// respect to the trivial conditional expectation (checked at construction).
struct ProductSpace {
    SpacePtr base;
    std::vector<Element> coordinates;
};

inline ProductSpace product_space(const std::vector<std::vector<FactorOutcome>>& factors,
                                  bool verify = true) {
    if (factors.empty()) throw DomainError("product_space: needs at least one factor");
    for (std::size_t k = 0; k < factors.size(); ++k) {
        if (factors[k].empty())
            throw DomainError("product_space: factor " + std::to_string(k) + " is empty");
        Rat total = 0;
        for (const auto& o : factors[k]) {
            if (o.weight <= 0)
                throw DomainError("product_space: factor " + std::to_string(k) +
                                  " has a non-positive weight");
            total += o.weight;
        }
        if (total != 1)
            throw DomainError("product_space: factor " + std::to_string(k) + " weights sum to " +
                              rat_to_string(total) + ", expected 1");
    }

    std::size_t atom_count = 1;
    for (const auto& f : factors) atom_count *= f.size();

    std::vector<std::string> atoms;
    std::vector<Rat> weights;
    atoms.reserve(atom_count);
    weights.reserve(atom_count);
    std::vector<std::vector<Rat>> coordinate_values(factors.size(),
                                                    std::vector<Rat>(atom_count));
    std::vector<std::size_t> idx(factors.size(), 0);
    for (std::size_t a = 0; a < atom_count; ++a) {
        std::string name;
        Rat w = 1;
        for (std::size_t k = 0; k < factors.size(); ++k) {
            if (k) name += '.';
            name += std::to_string(idx[k]);
            w *= factors[k][idx[k]].weight;
            coordinate_values[k][a] = factors[k][idx[k]].value;
        }
        atoms.push_back(std::move(name));
        weights.push_back(std::move(w));
        // odometer, last factor fastest
        for (std::size_t k = factors.size(); k-- > 0;) {
            if (++idx[k] < factors[k].size()) break;
            idx[k] = 0;
        }
    }

    ProductSpace out;
    out.base = make_space(std::move(atoms), std::move(weights));
    out.coordinates.reserve(factors.size());
    for (auto& values : coordinate_values)
        out.coordinates.emplace_back(out.base, std::move(values));

    if (verify) {
        CondExp t = CondExp::trivial(out.base);
        auto verdict = sequence_independent(t, out.coordinates, kDefaultPairSize,
                                            /*family_cap=*/factors.size());
        if (!verdict.holds)
            throw Error("product_space: coordinates failed the independence check");
    }
    return out;
}

/// Fair +-1 coin flips.
inline std::vector<std::vector<FactorOutcome>> fair_sign_factors(std::size_t n) {
    std::vector<FactorOutcome> coin{{Rat(1), Rat(1, 2)}, {Rat(-1), Rat(1, 2)}};
    return std::vector<std::vector<FactorOutcome>>(n, coin);
}

/// Partial-sum process X_n = f_1 + ... + f_n at times 1..N. When the f_k are
/// T-conditionally independent the result is a Markov process; independence
/// is sufficient, not necessary, so no hypothesis is enforced here.
inline Process partial_sums(const std::vector<Element>& fs, const CondExp& t, const Element& e) {
    if (fs.empty()) throw DomainError("partial_sums: needs at least one summand");
    std::vector<int> times;
    std::vector<Element> sums;
    Element acc = Element::zero(t.space());
    for (std::size_t k = 0; k < fs.size(); ++k) {
        require_same_space(t.space(), fs[k].space(), "partial_sums");
        acc = acc + fs[k];
        sums.push_back(acc);
        times.push_back(static_cast<int>(k) + 1);
    }
    return Process(t, e, std::move(times), std::move(sums));
}

/// <R(T), S_1..S_n> == <R(T), f_1..f_n> for every n — the first line of the
/// independent-sums argument, checkable as a partition identity.
inline bool partial_sums_generate_same_subspaces(const std::vector<Element>& fs,
                                                 const CondExp& t) {
    Element acc = Element::zero(t.space());
    std::vector<Element> sums, raw;
    for (const auto& f : fs) {
        acc = acc + f;
        sums.push_back(acc);
        raw.push_back(f);
        Partition by_sums = generated_partition(t.partition(), std::span<const Element>(sums));
        Partition by_raw = generated_partition(t.partition(), std::span<const Element>(raw));
        if (by_sums != by_raw) return false;
    }
    return true;
}

/// The natural filtration TT_i = conditional expectation onto
/// <R(T), X_{t_1},...,X_{t_i}>.
inline std::vector<CondExp> history_filtration(const Process& proc) {
    std::vector<CondExp> out;
    std::vector<int> ts;
    for (int t : proc.times()) {
        ts.push_back(t);
        out.push_back(history_condexp(proc, ts));
    }
    return out;
}

struct MartingaleWitness {
    std::size_t i, j;  // positions into the time list, i <= j
    Element lhs;       // TT_i X_j
    Element rhs;       // X_i
};

struct MartingaleReport {
    bool holds = false;
    std::optional<MartingaleWitness> witness;
    explicit operator bool() const { return holds; }
};

/// Martingale check: TT_i X_j == X_i for all i <= j (i == j covers
/// adaptedness). The filtration must be increasing: each range refines the
/// previous one.
inline MartingaleReport is_martingale(const Process& proc,
                                      const std::vector<CondExp>& filtration) {
    if (filtration.size() != proc.times().size())
        throw StructureError("is_martingale: filtration length mismatch");
    for (std::size_t i = 1; i < filtration.size(); ++i)
        if (!filtration[i].partition().refines(filtration[i - 1].partition()))
            throw DomainError("is_martingale: filtration is not increasing");
    for (std::size_t i = 0; i < filtration.size(); ++i)
        for (std::size_t j = i; j < filtration.size(); ++j) {
            Element lhs = filtration[i].apply(proc.elements()[j]);
            if (lhs != proc.elements()[i])
                return {false, MartingaleWitness{i, j, std::move(lhs), proc.elements()[i]}};
        }
    return {true, std::nullopt};
}

inline MartingaleReport is_martingale(const Process& proc) {
    return is_martingale(proc, history_filtration(proc));
}

/// Finite-horizon record of the T-boundedness hypothesis T|S_n| <= g.
struct BoundedSumReport {
    bool mean_zero_hypothesis = false;       // T f_i == 0 for all i <= horizon
    std::vector<Element> t_abs_sums;         // T|S_n| for n = 1..horizon
    std::optional<std::size_t> first_violation;  // 1-based n with T|S_n| <= g failing
    bool bounded() const { return !first_violation.has_value(); }
};

/// Verifies T|S_n| <= g pointwise for n up to the horizon and reports the
/// running sequence. Hypothesis failures are reported, not thrown. At finite
/// horizon on a finite space the order-convergence conclusion is immediate;
/// only the bound is informative.
inline BoundedSumReport bounded_sum_check(const std::vector<Element>& fs, const CondExp& t,
                                          const Element& g, std::size_t horizon) {
    if (horizon > fs.size()) throw DomainError("bounded_sum_check: horizon exceeds sequence");
    BoundedSumReport report;
    report.mean_zero_hypothesis = true;
    for (std::size_t i = 0; i < horizon; ++i)
        if (!t.apply(fs[i]).is_zero()) report.mean_zero_hypothesis = false;
    Element sum = Element::zero(t.space());
    for (std::size_t n = 1; n <= horizon; ++n) {
        sum = sum + fs[n - 1];
        Element bound = t.apply(abs(sum));
        if (!leq(bound, g) && !report.first_violation) report.first_violation = n;
        report.t_abs_sums.push_back(std::move(bound));
    }
    return report;
}

/// A process built from increments, with f_0 = 0 and f_n the n-th partial
/// sum. Carries the increments so the Brownian axioms can be re-verified.
struct BrownianProcess {
    Process process;
    std::vector<Element> increments;
};

/// Builds the partial-sum process of the given increments without verifying
/// the Brownian axioms; negative tests tamper with increments and expect
/// verify_brownian to fail.
inline BrownianProcess make_brownian(std::vector<Element> increments, const CondExp& t,
                                     const Element& e) {
    Process proc = partial_sums(increments, t, e);
    return {std::move(proc), std::move(increments)};
}

struct VarianceFailure {
    int n, m;
    Element lhs;  // T (f_n - f_m)^2
    Element rhs;  // |n - m| e
};

struct BrownianReport {
    IndependenceVerdict increments_independent;
    std::vector<int> mean_failures;               // i with T g_i != 0
    std::vector<VarianceFailure> variance_failures;  // pairs violating axiom (iii)
    bool ok() const {
        return increments_independent.holds && mean_failures.empty() &&
               variance_failures.empty();
    }
};

/// Checks the three Brownian axioms exactly: (i) the increments form a
/// T-conditionally independent sequence, (ii) T g_i == 0, (iii)
/// T (f_n - f_m)^2 == |n - m| e for ALL pairs 0 <= m, n <= N (f_0 = 0),
/// squares taken in the f-algebra with unit e.
inline BrownianReport verify_brownian(const BrownianProcess& bp) {
    const CondExp& t = bp.process.base();
    const Element& e = bp.process.unit();
    BrownianReport report{
        sequence_independent(t, bp.increments, kDefaultPairSize,
                             /*family_cap=*/bp.increments.size()),
        {},
        {}};
    for (std::size_t i = 0; i < bp.increments.size(); ++i)
        if (!t.apply(bp.increments[i]).is_zero())
            report.mean_failures.push_back(static_cast<int>(i) + 1);
    const std::size_t n_times = bp.process.times().size();
    auto f_at = [&](std::size_t n) {
        return n == 0 ? Element::zero(bp.process.space()) : bp.process.elements()[n - 1];
    };
    for (std::size_t m = 0; m <= n_times; ++m)
        for (std::size_t n = m + 1; n <= n_times; ++n) {
            Element diff = f_at(n) - f_at(m);
            Element lhs = t.apply(e_mul(diff, diff, e));
            Element rhs = Rat(n - m) * e;
            if (lhs != rhs)
                report.variance_failures.push_back({static_cast<int>(n), static_cast<int>(m),
                                                    std::move(lhs), std::move(rhs)});
        }
    return report;
}

inline bool brownian_is_markov(const BrownianProcess& bp, std::size_t cap = kEnumBlockCap) {
    return is_markov(bp.process, cap).verdict;
}

inline constexpr std::size_t kWalkCap = 5;

/// The minimal realization of the Brownian axioms: partial sums of N fair
/// +-1 increments on the 2^N-atom product space, T trivial, e = 1. All three
/// axioms are verified at construction.
inline BrownianProcess rademacher_walk(std::size_t n, std::size_t cap = kWalkCap) {
    if (n < 1 || n > cap)
        throw CapError("rademacher_walk: " + std::to_string(n) + " steps exceeds cap of " +
                       std::to_string(cap));
    ProductSpace ps = product_space(fair_sign_factors(n), /*verify=*/false);
    CondExp t = CondExp::trivial(ps.base);
    Element e = Element::ones(ps.base);
    BrownianProcess bp = make_brownian(ps.coordinates, t, e);
    BrownianReport report = verify_brownian(bp);
    if (!report.ok()) throw Error("rademacher_walk: axiom verification failed");
    return bp;
}

}  // namespace rieszprob
