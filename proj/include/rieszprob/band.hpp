#pragma once

#include <string>
#include <vector>

#include "rieszprob/element.hpp"
#include "rieszprob/errors.hpp"
#include "rieszprob/rational.hpp"
#include "rieszprob/sample_space.hpp"

namespace rieszprob {

/// Band projection: acts as multiplication by the indicator of its support.
/// The band B it projects onto is recoverable as the elements supported
/// inside `support`. Idempotent and positive by construction; the
/// complementary projection has complementary support.
class BandProjection {
public:
    BandProjection(SpacePtr space, std::vector<bool> support)
        : space_(std::move(space)), support_(std::move(support)) {
        if (!space_) throw StructureError("band projection needs a sample space");
        if (support_.size() != space_->size())
            throw StructureError("band projection support size mismatch");
    }

    static BandProjection zero(SpacePtr space) {
        std::vector<bool> s(space->size(), false);
        return BandProjection(std::move(space), std::move(s));
    }
    static BandProjection identity(SpacePtr space) {
        std::vector<bool> s(space->size(), true);
        return BandProjection(std::move(space), std::move(s));
    }

    const SpacePtr& space() const { return space_; }
    const std::vector<bool>& support() const { return support_; }
    bool contains(std::size_t atom) const { return support_[atom]; }

    Element apply(const Element& f) const {
        require_same_space(space_, f.space(), "band projection");
        std::vector<Rat> v;
        v.reserve(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) v.push_back(support_[i] ? f[i] : Rat(0));
        return Element(space_, std::move(v));
    }

    BandProjection complement() const {
        std::vector<bool> s(support_);
        s.flip();
        return BandProjection(space_, std::move(s));
    }

    /// Composition PQ = QP: bands multiply as indicator intersection.
    friend BandProjection compose(const BandProjection& p, const BandProjection& q) {
        require_same_space(p.space_, q.space_, "band composition");
        std::vector<bool> s(p.support_);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = s[i] && q.support_[i];
        return BandProjection(p.space_, std::move(s));
    }

    bool operator==(const BandProjection& q) const {
        return same_space(space_, q.space_) && support_ == q.support_;
    }
    bool operator!=(const BandProjection& q) const { return !(*this == q); }

    std::vector<std::string> support_atoms() const {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < support_.size(); ++i)
            if (support_[i]) names.push_back(space_->atom(i));
        return names;
    }

    Rat measure() const {
        Rat m = 0;
        for (std::size_t i = 0; i < support_.size(); ++i)
            if (support_[i]) m += space_->weight(i);
        return m;
    }

private:
    SpacePtr space_;
    std::vector<bool> support_;
};

/// Projection onto the band generated by f >= 0: supported where f > 0.
inline BandProjection band_projection_of(const Element& f) {
    if (!f.is_nonnegative())
        throw DomainError("band_projection_of: generator has a negative value");
    std::vector<bool> s;
    s.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) s.push_back(f[i] > 0);
    return BandProjection(f.space(), std::move(s));
}

/// Result of evaluating P_f g by the sup formula sup_n (g ^ n f) instead of
/// by indicator action.
struct SupFormulaResult {
    Element value;          // the stabilized supremum, split over g+ and g-
    BigInt stabilized_at;   // first n with g ^ n f at its limit (max over parts)
    BigInt horizon;         // ceil(max|g| / min positive value of f); 0 when f == 0
};

namespace detail {
// For g >= 0 the sequence g ^ nf is nondecreasing, so the running supremum
// is g ^ nf itself; stabilization is the first n where it stops moving.
inline std::pair<Element, BigInt> sup_formula_nonneg(const Element& f, const Element& g,
                                                     const BigInt& horizon) {
    Element current = inf(g, Element::zero(g.space()));  // g ^ 0*f with g >= 0 is 0
    BigInt stabilized = 0;
    for (BigInt n = 1; n <= horizon; ++n) {
        Element next = inf(g, Rat(n) * f);
        if (next != current) {
            current = next;
            stabilized = n;
        }
    }
    return {current, stabilized};
}
}  // namespace detail

/// P_f g computed from the band formula, with the stabilization bound
/// N = ceil(max|g| / min positive f-value) derived rather than guessed: past
/// N, n*f dominates |g| on the support of f and the supremum has been reached.
inline SupFormulaResult band_projection_sup_formula(const Element& f, const Element& g) {
    if (!f.is_nonnegative())
        throw DomainError("band_projection_sup_formula: generator has a negative value");
    require_same_space(f.space(), g.space(), "band_projection_sup_formula");

    auto min_f = min_positive_value(f);
    if (!min_f) {
        // f == 0: empty band, P_f g = 0 at horizon 0.
        return {Element::zero(g.space()), 0, 0};
    }
    Rat max_abs_g = max_value(abs(g));
    BigInt horizon = rat_ceil(max_abs_g / *min_f);

    auto [up, n_up] = detail::sup_formula_nonneg(f, pos(g), horizon);
    auto [dn, n_dn] = detail::sup_formula_nonneg(f, neg(g), horizon);
    return {up - dn, std::max(n_up, n_dn), horizon};
}

}  // namespace rieszprob
