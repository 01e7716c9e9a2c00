#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rieszprob/band.hpp"
#include "rieszprob/condexp.hpp"
#include "rieszprob/element.hpp"
#include "rieszprob/errors.hpp"
#include "rieszprob/partition.hpp"

namespace rieszprob {

inline constexpr std::size_t kIndependenceEnumCap = 12;
inline constexpr std::size_t kFamilyCap = 4;
inline constexpr std::size_t kDefaultPairSize = 2;

/// A failed independence identity, with everything needed to re-evaluate the
/// inequality exactly: the pair of projections, the element the identity was
/// evaluated at, and the three sides TPTQ*, TPQ*, TQTP*.
struct IndependenceWitness {
    BandProjection p, q;
    Element eval;
    Element tptq, tpq, tqtp;
    std::string context;
};

struct IndependenceVerdict {
    bool holds = false;
    std::optional<IndependenceWitness> witness;

    static IndependenceVerdict yes() { return {true, std::nullopt}; }
    static IndependenceVerdict no(IndependenceWitness w) { return {false, std::move(w)}; }
    explicit operator bool() const { return holds; }
};

namespace detail {
inline void require_t_invariant_unit(const CondExp& t, const Element& e) {
    if (!e.is_nonnegative() || !e.is_strictly_positive())
        throw DomainError("independence: e is not a weak order unit");
    if (t.apply(e) != e) throw DomainError("independence: unit not T-invariant");
}

/// Core identity check at a single element v (a unit or a range element);
/// the conditioning operator s is T itself for plain independence.
inline IndependenceVerdict check_identity(const CondExp& s, const BandProjection& p,
                                          const BandProjection& q, const Element& v,
                                          std::string context = {}) {
    Element tq = s.apply(q.apply(v));
    Element tp = s.apply(p.apply(v));
    Element tptq = s.apply(p.apply(tq));
    Element tpq = s.apply(compose(p, q).apply(v));
    Element tqtp = s.apply(q.apply(tp));
    if (tptq == tpq && tpq == tqtp) return IndependenceVerdict::yes();
    return IndependenceVerdict::no(
        {p, q, v, std::move(tptq), std::move(tpq), std::move(tqtp), std::move(context)});
}
}  // namespace detail

/// Band projections P and Q are T-conditionally independent at the
/// T-invariant weak order unit e: TPTQe == TPQe == TQTPe exactly.
inline IndependenceVerdict bands_independent(const CondExp& t, const BandProjection& p,
                                             const BandProjection& q, const Element& e) {
    detail::require_t_invariant_unit(t, e);
    return detail::check_identity(t, p, q, e);
}

/// The same identities quantified over a basis of R(T) (block indicators of
/// T's partition): the form equivalent to the single-unit definition. The
/// equivalence is exercised by tests; both directions are theorems.
inline IndependenceVerdict bands_independent_for_range(const CondExp& t, const BandProjection& p,
                                                       const BandProjection& q) {
    for (std::size_t b = 0; b < t.partition().block_count(); ++b) {
        Element w = t.partition().block_indicator(b);
        auto verdict = detail::check_identity(t, p, q, w, "range basis block " + std::to_string(b));
        if (!verdict.holds) return verdict;
    }
    return IndependenceVerdict::yes();
}

/// Pairwise independence routed through the generated subspaces: P and Q are
/// independent iff <Pe, R(T)> and <Qe, R(T)> are independent as subspaces.
/// Implemented as its own path so agreement with bands_independent is a
/// checkable theorem rather than an assumption.
inline IndependenceVerdict bands_independent_via_subspaces(const CondExp& t,
                                                           const BandProjection& p,
                                                           const BandProjection& q,
                                                           const Element& e,
                                                           std::size_t cap = kIndependenceEnumCap);

/// Subspace independence: every pair of band projections acting inside the
/// two subspaces passes the unit identity. Pair order (and the retained
/// first-failure witness) is deterministic: subset masks ascending on both
/// sides. The subspaces must contain R(T).
inline IndependenceVerdict subspaces_independent(const CondExp& t, const Partition& e1,
                                                 const Partition& e2, const Element& e,
                                                 std::size_t cap = kIndependenceEnumCap) {
    if (!e1.refines(t.partition()) || !e2.refines(t.partition()))
        throw DomainError("subspaces_independent: subspace does not contain R(T)");
    detail::require_t_invariant_unit(t, e);
    auto ps = enumerate_band_projections(e1, cap);
    auto qs = enumerate_band_projections(e2, cap);
    std::vector<Element> tq;
    tq.reserve(qs.size());
    for (const auto& q : qs) tq.push_back(t.apply(q.apply(e)));
    for (const auto& p : ps) {
        Element tp = t.apply(p.apply(e));
        for (std::size_t j = 0; j < qs.size(); ++j) {
            Element tptq = t.apply(p.apply(tq[j]));
            Element tpq = t.apply(compose(p, qs[j]).apply(e));
            Element tqtp = t.apply(qs[j].apply(tp));
            if (tptq != tpq || tpq != tqtp)
                return IndependenceVerdict::no(
                    {p, qs[j], e, std::move(tptq), std::move(tpq), std::move(tqtp), ""});
        }
    }
    return IndependenceVerdict::yes();
}

inline IndependenceVerdict subspaces_independent(const CondExp& t, const Partition& e1,
                                                 const Partition& e2,
                                                 std::size_t cap = kIndependenceEnumCap) {
    return subspaces_independent(t, e1, e2, Element::ones(t.space()), cap);
}

inline IndependenceVerdict bands_independent_via_subspaces(const CondExp& t,
                                                           const BandProjection& p,
                                                           const BandProjection& q,
                                                           const Element& e, std::size_t cap) {
    detail::require_t_invariant_unit(t, e);
    Partition e1 = generated_partition(t.partition(), {p.apply(e)});
    Partition e2 = generated_partition(t.partition(), {q.apply(e)});
    return subspaces_independent(t, e1, e2, e, cap);
}

/// Operator characterization: T1 T2 == T == T2 T1 with T_i the commuting
/// conditional expectation onto E_i. On failure the witness is recovered by
/// the pairwise scan (the two characterizations agree by theorem, which the
/// test suite asserts on every scenario).
inline IndependenceVerdict independent_via_condexp(const CondExp& t, const Partition& e1,
                                                   const Partition& e2,
                                                   std::size_t cap = kIndependenceEnumCap) {
    CondExp t1 = condexp_onto(t, e1);
    CondExp t2 = condexp_onto(t, e2);
    bool holds = (t1.matrix() * t2.matrix() == t.matrix()) &&
                 (t2.matrix() * t1.matrix() == t.matrix());
    if (holds) return IndependenceVerdict::yes();
    IndependenceVerdict scan = subspaces_independent(t, e1, e2, cap);
    return IndependenceVerdict{false, std::move(scan.witness)};
}

/// Range-collapse characterization: T_i f == T f for all f in a spanning set
/// of the opposite subspace (block indicators), both directions.
inline IndependenceVerdict independent_via_range_collapse(const CondExp& t, const Partition& e1,
                                                          const Partition& e2,
                                                          std::size_t cap = kIndependenceEnumCap) {
    CondExp t1 = condexp_onto(t, e1);
    CondExp t2 = condexp_onto(t, e2);
    auto collapse = [&](const CondExp& ti, const Partition& other) {
        for (std::size_t b = 0; b < other.block_count(); ++b) {
            Element f = other.block_indicator(b);
            if (ti.apply(f) != t.apply(f)) return false;
        }
        return true;
    };
    bool holds = collapse(t1, e2) && collapse(t2, e1);
    if (holds) return IndependenceVerdict::yes();
    IndependenceVerdict scan = subspaces_independent(t, e1, e2, cap);
    return IndependenceVerdict{false, std::move(scan.witness)};
}

/// Independence of E1 and E2 with respect to a dominating conditional
/// expectation S (ST == T): the operator identity
///   T_i T_<R(S),E_{3-i}> == T_i S T_<R(S),E_{3-i}>,  i = 1,2,
/// with T_<R(S),E_j> the block average over join(S's partition, E_j).
/// Witness, when the verdict is negative, comes from the equivalent
/// S-relative pairwise identities SP1SP2e == SP1P2e == SP2SP1e.
inline IndependenceVerdict independent_wrt_s(const CondExp& t, const CondExp& s,
                                             const Partition& e1, const Partition& e2,
                                             std::size_t cap = kIndependenceEnumCap) {
    if (s.matrix() * t.matrix() != t.matrix())
        throw DomainError("independent_wrt_s: S does not dominate T (ST != T)");
    if (!e1.refines(t.partition()) || !e2.refines(t.partition()))
        throw DomainError("independent_wrt_s: subspace does not contain R(T)");
    CondExp t1 = condexp_onto(t, e1);
    CondExp t2 = condexp_onto(t, e2);
    CondExp join2 = condexp_onto(t, join(s.partition(), e2));
    CondExp join1 = condexp_onto(t, join(s.partition(), e1));
    bool holds = (t1.matrix() * join2.matrix() == t1.matrix() * s.matrix() * join2.matrix()) &&
                 (t2.matrix() * join1.matrix() == t2.matrix() * s.matrix() * join1.matrix());
    if (holds) return IndependenceVerdict::yes();
    Element e = Element::ones(t.space());
    for (const auto& p : enumerate_band_projections(e1, cap))
        for (const auto& q : enumerate_band_projections(e2, cap)) {
            auto v = detail::check_identity(s, p, q, e, "S-relative");
            if (!v.holds) return v;
        }
    return IndependenceVerdict{false, std::nullopt};
}

/// All band projections on the space (the full 2^n enumeration) that are
/// self-independent at e. These are exactly the projections commuting with
/// T, i.e. supports that are unions of T-blocks; that equality is an
/// acceptance check, not assumed here.
inline std::vector<BandProjection> self_independent_projections(const CondExp& t, const Element& e,
                                                                std::size_t cap = kEnumBlockCap) {
    detail::require_t_invariant_unit(t, e);
    const std::size_t n = t.space()->size();
    if (n > cap)
        throw CapError("self_independent_projections: " + std::to_string(n) +
                       " atoms exceeds cap of " + std::to_string(cap));
    std::vector<BandProjection> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<bool> support(n, false);
        for (std::size_t i = 0; i < n; ++i) support[i] = (mask >> i) & 1;
        BandProjection p(t.space(), std::move(support));
        if (detail::check_identity(t, p, p, e).holds) out.push_back(std::move(p));
    }
    return out;
}

/// Family independence: every pair of disjoint nonempty index sets (sizes
/// capped by max_pair_size) spans subspaces that pass the pairwise check.
/// E_Lambda is the join of the members, which all contain R(T).
inline IndependenceVerdict family_independent(const CondExp& t, const std::vector<Partition>& parts,
                                              std::size_t max_pair_size = kDefaultPairSize,
                                              std::size_t family_cap = kFamilyCap,
                                              std::size_t enum_cap = kIndependenceEnumCap) {
    if (parts.size() > family_cap)
        throw CapError("family_independent: " + std::to_string(parts.size()) +
                       " members exceeds cap of " + std::to_string(family_cap));
    for (const auto& part : parts)
        if (!part.refines(t.partition()))
            throw DomainError("family_independent: member does not contain R(T)");
    const std::size_t k = parts.size();
    auto joined = [&](std::uint64_t mask) {
        Partition acc = t.partition();
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (std::uint64_t{1} << i)) acc = join(acc, parts[i]);
        return acc;
    };
    auto small_enough = [&](std::uint64_t mask) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < k; ++i) c += (mask >> i) & 1;
        return c >= 1 && c <= max_pair_size;
    };
    for (std::uint64_t m1 = 1; m1 < (std::uint64_t{1} << k); ++m1) {
        if (!small_enough(m1)) continue;
        for (std::uint64_t m2 = m1 + 1; m2 < (std::uint64_t{1} << k); ++m2) {
            if (!small_enough(m2) || (m1 & m2)) continue;
            auto verdict = subspaces_independent(t, joined(m1), joined(m2), enum_cap);
            if (!verdict.holds) {
                verdict.witness->context = "index sets " + std::to_string(m1) + " and " +
                                           std::to_string(m2) + " (bitmasks)";
                return verdict;
            }
        }
    }
    return IndependenceVerdict::yes();
}

/// Sequence form: members are the subspaces generated by R(T) and each f_n.
inline IndependenceVerdict sequence_independent(const CondExp& t, const std::vector<Element>& fs,
                                                std::size_t max_pair_size = kDefaultPairSize,
                                                std::size_t family_cap = kFamilyCap,
                                                std::size_t enum_cap = kIndependenceEnumCap) {
    std::vector<Partition> parts;
    parts.reserve(fs.size());
    for (const auto& f : fs) parts.push_back(generated_partition(t.partition(), {f}));
    return family_independent(t, parts, max_pair_size, family_cap, enum_cap);
}

}  // namespace rieszprob
