#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "rieszprob/errors.hpp"
#include "rieszprob/rational.hpp"

namespace rieszprob {

/// A finite set of atoms with strictly positive probability masses summing
/// to one. The ambient vector lattice E is the space of rational-valued
/// functions on the atoms with pointwise order; atom order fixes the vector
/// layout, so serialization is reproducible.
///
/// Immutable after construction and always held by shared_ptr, so elements
/// and operators can share one space across threads without synchronization.
class SampleSpace {
public:
    SampleSpace(std::vector<std::string> atoms, std::vector<Rat> weights)
        : atoms_(std::move(atoms)), weights_(std::move(weights)) {
        if (atoms_.empty()) throw DomainError("sample space needs at least one atom");
        if (atoms_.size() != weights_.size())
            throw StructureError("atom/weight count mismatch: " + std::to_string(atoms_.size()) +
                                 " atoms, " + std::to_string(weights_.size()) + " weights");
        Rat total = 0;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (weights_[i] <= 0)
                throw DomainError("weight of atom \"" + atoms_[i] + "\" is " +
                                  rat_to_string(weights_[i]) + ", must be > 0");
            total += weights_[i];
            auto [it, fresh] = index_.emplace(atoms_[i], i);
            if (!fresh) throw DomainError("duplicate atom identifier \"" + atoms_[i] + "\"");
        }
        if (total != 1)
            throw DomainError("weights sum to " + rat_to_string(total) + ", expected 1");
    }

    std::size_t size() const { return atoms_.size(); }
    const std::vector<std::string>& atoms() const { return atoms_; }
    const std::vector<Rat>& weights() const { return weights_; }
    const std::string& atom(std::size_t i) const { return atoms_[i]; }
    const Rat& weight(std::size_t i) const { return weights_[i]; }

    /// Index of a named atom, or npos when unknown.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(const std::string& atom) const {
        auto it = index_.find(atom);
        return it == index_.end() ? npos : it->second;
    }

    bool operator==(const SampleSpace& other) const {
        return atoms_ == other.atoms_ && weights_ == other.weights_;
    }

private:
    std::vector<std::string> atoms_;
    std::vector<Rat> weights_;
    std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const SampleSpace>;

inline SpacePtr make_space(std::vector<std::string> atoms, std::vector<Rat> weights) {
    return std::make_shared<const SampleSpace>(std::move(atoms), std::move(weights));
}

/// Uniform space with atoms "w0", "w1", ...
inline SpacePtr make_uniform_space(std::size_t n) {
    std::vector<std::string> atoms;
    std::vector<Rat> weights(n, Rat(1, static_cast<unsigned>(n)));
    atoms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) atoms.push_back("w" + std::to_string(i));
    return make_space(std::move(atoms), std::move(weights));
}

inline bool same_space(const SpacePtr& a, const SpacePtr& b) {
    return a == b || (a && b && *a == *b);
}

inline void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what) {
    if (!same_space(a, b))
        throw StructureError(std::string(what) + ": operands live on different sample spaces");
}

}  // namespace rieszprob
