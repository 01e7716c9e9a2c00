#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rieszprob/errors.hpp"
#include "rieszprob/rational.hpp"
#include "rieszprob/sample_space.hpp"

namespace rieszprob {

/// An element of the Riesz space E: one exact rational per atom, pointwise
/// order. Immutable value type.
class Element {
public:
    Element(SpacePtr space, std::vector<Rat> values)
        : space_(std::move(space)), values_(std::move(values)) {
        if (!space_) throw StructureError("element needs a sample space");
        if (values_.size() != space_->size())
            throw StructureError("element has " + std::to_string(values_.size()) +
                                 " values on a space of " + std::to_string(space_->size()) +
                                 " atoms");
    }

    static Element constant(SpacePtr space, const Rat& value) {
        std::vector<Rat> v(space->size(), value);
        return Element(std::move(space), std::move(v));
    }
    static Element zero(SpacePtr space) { return constant(std::move(space), 0); }
    /// The constant-one function; the canonical weak order unit.
    static Element ones(SpacePtr space) { return constant(std::move(space), 1); }

    const SpacePtr& space() const { return space_; }
    std::size_t size() const { return values_.size(); }
    const Rat& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<Rat>& values() const { return values_; }

    Element operator+(const Element& g) const {
        require_same_space(space_, g.space_, "add");
        std::vector<Rat> v(values_);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += g.values_[i];
        return Element(space_, std::move(v));
    }
    Element operator-(const Element& g) const {
        require_same_space(space_, g.space_, "subtract");
        std::vector<Rat> v(values_);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= g.values_[i];
        return Element(space_, std::move(v));
    }
    Element operator-() const {
        std::vector<Rat> v(values_);
        for (auto& x : v) x = -x;
        return Element(space_, std::move(v));
    }
    Element scaled(const Rat& c) const {
        std::vector<Rat> v(values_);
        for (auto& x : v) x *= c;
        return Element(space_, std::move(v));
    }

    bool operator==(const Element& g) const {
        return same_space(space_, g.space_) && values_ == g.values_;
    }
    bool operator!=(const Element& g) const { return !(*this == g); }

    bool is_nonnegative() const {
        return std::all_of(values_.begin(), values_.end(), [](const Rat& x) { return x >= 0; });
    }
    bool is_strictly_positive() const {
        return std::all_of(values_.begin(), values_.end(), [](const Rat& x) { return x > 0; });
    }
    bool is_zero() const {
        return std::all_of(values_.begin(), values_.end(), [](const Rat& x) { return x == 0; });
    }

private:
    SpacePtr space_;
    std::vector<Rat> values_;
};

inline Element operator*(const Rat& c, const Element& f) { return f.scaled(c); }

inline Element sup(const Element& f, const Element& g) {
    require_same_space(f.space(), g.space(), "sup");
    std::vector<Rat> v;
    v.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v.push_back(std::max(f[i], g[i]));
    return Element(f.space(), std::move(v));
}

inline Element inf(const Element& f, const Element& g) {
    require_same_space(f.space(), g.space(), "inf");
    std::vector<Rat> v;
    v.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v.push_back(std::min(f[i], g[i]));
    return Element(f.space(), std::move(v));
}

/// |f| = sup(f, -f).
inline Element abs(const Element& f) { return sup(f, -f); }

/// Positive part f+ = sup(f, 0).
inline Element pos(const Element& f) { return sup(f, Element::zero(f.space())); }

/// Negative part f- = sup(-f, 0), so f = f+ - f-.
inline Element neg(const Element& f) { return pos(-f); }

/// Pointwise f <= g.
inline bool leq(const Element& f, const Element& g) {
    require_same_space(f.space(), g.space(), "leq");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] > g[i]) return false;
    return true;
}

/// In a finite-dimensional space the weak order units are exactly the
/// strictly positive elements: |g| ^ n f climbs to |g| iff f > 0 everywhere.
inline bool is_weak_order_unit(const Element& f) {
    if (!f.is_nonnegative())
        throw DomainError("is_weak_order_unit: input has a negative value");
    return f.is_strictly_positive();
}

/// Multiplication in the f-algebra E_e with unit e: (f,g) -> f*g/e pointwise.
/// e_mul(f, e, e) == f; commutative and associative for a fixed e.
inline Element e_mul(const Element& f, const Element& g, const Element& e) {
    require_same_space(f.space(), g.space(), "e_mul");
    require_same_space(f.space(), e.space(), "e_mul");
    if (!e.is_nonnegative() || !e.is_strictly_positive())
        throw DomainError("e_mul: e is not a weak order unit");
    std::vector<Rat> v;
    v.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v.push_back(f[i] * g[i] / e[i]);
    return Element(f.space(), std::move(v));
}

/// Expectation against the space's weights; the action of the trivial
/// conditional expectation as a scalar.
inline Rat expectation(const Element& f) {
    Rat s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f.space()->weight(i) * f[i];
    return s;
}

inline Rat max_value(const Element& f) {
    Rat m = f[0];
    for (std::size_t i = 1; i < f.size(); ++i) m = std::max(m, f[i]);
    return m;
}

/// Smallest strictly positive value, if any.
inline std::optional<Rat> min_positive_value(const Element& f) {
    std::optional<Rat> m;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] > 0 && (!m || f[i] < *m)) m = f[i];
    return m;
}

}  // namespace rieszprob
