#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rieszprob/band.hpp"
#include "rieszprob/element.hpp"
#include "rieszprob/errors.hpp"
#include "rieszprob/sample_space.hpp"

namespace rieszprob {

inline constexpr std::size_t kEnumBlockCap = 16;

/// A partition of the atom set. Stands in for the closed Riesz subspace of
/// elements constant on every block; with the base partition of a
/// conditional expectation T, the partitions refining it are exactly the
/// closed Riesz subspaces containing R(T) that carry commuting conditional
/// expectations (the Radon-Nikodym-Douglas-Ando correspondence made finite).
///
/// Canonical form: blocks sorted ascending internally and ordered by least
/// atom, so equality is structural.
class Partition {
public:
    Partition(SpacePtr space, std::vector<std::vector<std::size_t>> blocks)
        : space_(std::move(space)), blocks_(std::move(blocks)) {
        if (!space_) throw StructureError("partition needs a sample space");
        canonicalize_and_validate();
    }

    static Partition trivial(SpacePtr space) {
        std::vector<std::size_t> all(space->size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return Partition(std::move(space), {std::move(all)});
    }

    static Partition discrete(SpacePtr space) {
        std::vector<std::vector<std::size_t>> blocks;
        blocks.reserve(space->size());
        for (std::size_t i = 0; i < space->size(); ++i) blocks.push_back({i});
        return Partition(std::move(space), std::move(blocks));
    }

    /// Groups atoms carrying equal labels.
    template <typename Label>
    static Partition from_labels(SpacePtr space, const std::vector<Label>& labels) {
        if (labels.size() != space->size())
            throw StructureError("label count does not match atom count");
        std::map<Label, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
        std::vector<std::vector<std::size_t>> blocks;
        blocks.reserve(groups.size());
        for (auto& [label, atoms] : groups) blocks.push_back(std::move(atoms));
        return Partition(std::move(space), std::move(blocks));
    }

    /// Level sets of an element: the partition its generated subspace lives on.
    static Partition level_sets(const Element& x) {
        return from_labels(x.space(), x.values());
    }

    const SpacePtr& space() const { return space_; }
    const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
    std::size_t block_count() const { return blocks_.size(); }
    std::size_t block_of(std::size_t atom) const { return block_of_[atom]; }

    bool operator==(const Partition& other) const {
        return same_space(space_, other.space_) && blocks_ == other.blocks_;
    }
    bool operator!=(const Partition& other) const { return !(*this == other); }

    /// True iff every block of this partition lies inside a block of g:
    /// this is finer, so its subspace contains g's subspace.
    bool refines(const Partition& g) const {
        require_same_space(space_, g.space_, "refines");
        for (const auto& block : blocks_) {
            std::size_t target = g.block_of(block.front());
            for (std::size_t atom : block)
                if (g.block_of(atom) != target) return false;
        }
        return true;
    }

    /// Indicator of one block as an element (a nonnegative basis vector of
    /// the subspace).
    Element block_indicator(std::size_t b) const {
        std::vector<Rat> v(space_->size(), 0);
        for (std::size_t atom : blocks_[b]) v[atom] = 1;
        return Element(space_, std::move(v));
    }

    BandProjection block_projection(std::size_t b) const {
        std::vector<bool> s(space_->size(), false);
        for (std::size_t atom : blocks_[b]) s[atom] = true;
        return BandProjection(space_, std::move(s));
    }

    /// The band projection whose support is the union of the blocks selected
    /// by `mask` (bit b = block b in canonical order).
    BandProjection union_projection(std::uint64_t mask) const {
        std::vector<bool> s(space_->size(), false);
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            if (mask & (std::uint64_t{1} << b))
                for (std::size_t atom : blocks_[b]) s[atom] = true;
        return BandProjection(space_, std::move(s));
    }

    /// Whether a support is a union of whole blocks, i.e. the projection
    /// acts inside the subspace.
    bool is_union_of_blocks(const std::vector<bool>& support) const {
        for (const auto& block : blocks_) {
            bool first = support[block.front()];
            for (std::size_t atom : block)
                if (support[atom] != first) return false;
        }
        return true;
    }

private:
    void canonicalize_and_validate() {
        const std::size_t n = space_->size();
        block_of_.assign(n, SampleSpace::npos);
        for (auto& block : blocks_) {
            if (block.empty()) throw StructureError("partition has an empty block");
            std::sort(block.begin(), block.end());
        }
        std::sort(blocks_.begin(), blocks_.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        std::size_t covered = 0;
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            for (std::size_t atom : blocks_[b]) {
                if (atom >= n) throw StructureError("partition references atom out of range");
                if (block_of_[atom] != SampleSpace::npos)
                    throw StructureError("partition blocks overlap at atom \"" +
                                         space_->atom(atom) + "\"");
                block_of_[atom] = b;
                ++covered;
            }
        }
        if (covered != n) throw StructureError("partition does not cover the atom set");
    }

    SpacePtr space_;
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<std::size_t> block_of_;
};

/// Common refinement: blocks are the nonempty intersections of an h1-block
/// with an h2-block. This is the partition of the subspace generated by the
/// two subspaces together; it refines both inputs and is the coarsest
/// partition doing so.
inline Partition join(const Partition& h1, const Partition& h2) {
    require_same_space(h1.space(), h2.space(), "join");
    std::vector<std::pair<std::size_t, std::size_t>> labels;
    labels.reserve(h1.space()->size());
    for (std::size_t i = 0; i < h1.space()->size(); ++i)
        labels.emplace_back(h1.block_of(i), h2.block_of(i));
    return Partition::from_labels(h1.space(), labels);
}

/// Coarsest partition refining g on which every x is constant per block:
/// the subspace generated by g's subspace together with the elements.
inline Partition generated_partition(const Partition& g, std::span<const Element> xs) {
    Partition result = g;
    for (const Element& x : xs) {
        require_same_space(g.space(), x.space(), "generated_partition");
        result = join(result, Partition::level_sets(x));
    }
    return result;
}

inline Partition generated_partition(const Partition& g, std::initializer_list<Element> xs) {
    return generated_partition(g, std::span<const Element>(xs.begin(), xs.size()));
}

/// All 2^k band projections whose support is a union of blocks — exactly the
/// band projections Q with Qe in the subspace (Q = P_{Qe}). Deterministic
/// order: subset masks ascending, bit b = block b.
inline std::vector<BandProjection> enumerate_band_projections(const Partition& h,
                                                              std::size_t cap = kEnumBlockCap) {
    if (h.block_count() > cap)
        throw CapError("enumerate_band_projections: " + std::to_string(h.block_count()) +
                       " blocks exceeds cap of " + std::to_string(cap));
    std::vector<BandProjection> out;
    out.reserve(std::size_t{1} << h.block_count());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << h.block_count()); ++mask)
        out.push_back(h.union_projection(mask));
    return out;
}

/// Whether f lies in the subspace of h (constant on every block).
inline bool is_measurable(const Element& f, const Partition& h) {
    require_same_space(f.space(), h.space(), "is_measurable");
    for (const auto& block : h.blocks()) {
        const Rat& v = f[block.front()];
        for (std::size_t atom : block)
            if (f[atom] != v) return false;
    }
    return true;
}

/// Every partition of an n-atom space, enumerated as restricted growth
/// strings (label[0] = 0, label[i] <= 1 + max of earlier labels); for
/// brute-force oracles on small spaces.
inline std::vector<Partition> all_partitions(const SpacePtr& space) {
    const std::size_t n = space->size();
    std::vector<Partition> out;
    std::vector<std::size_t> label(n, 0);
    auto prefix_max = [&](std::size_t i) {
        std::size_t m = 0;
        for (std::size_t j = 0; j < i; ++j) m = std::max(m, label[j]);
        return m;
    };
    while (true) {
        out.push_back(Partition::from_labels(space, label));
        std::size_t pos = SampleSpace::npos;
        for (std::size_t j = n; j-- > 1;) {
            if (label[j] <= prefix_max(j)) {
                pos = j;
                break;
            }
        }
        if (pos == SampleSpace::npos) break;
        ++label[pos];
        for (std::size_t j = pos + 1; j < n; ++j) label[j] = 0;
    }
    return out;
}

}  // namespace rieszprob
