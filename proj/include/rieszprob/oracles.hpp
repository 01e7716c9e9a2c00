#pragma once

#include <cstdint>
#include <vector>

#include "rieszprob/errors.hpp"
#include "rieszprob/linalg.hpp"
#include "rieszprob/partition.hpp"
#include "rieszprob/rational.hpp"
#include "rieszprob/sample_space.hpp"

// Brute-force oracles, deliberately independent of the operator kernel: they
// compute with raw measures and normal equations only, and exist to
// cross-check the operator-based verdicts. Keep them free of CondExp,
// Element and the band formula.

namespace rieszprob::oracle {

inline constexpr std::size_t kOracleBlockCap = 12;

/// Classical conditional independence of sigma(E1) and sigma(E2) given
/// sigma(G): for every G-block B and all unions A1, A2 of E1-/E2-blocks,
///   mu(A1 n A2 n B) * mu(B) == mu(A1 n B) * mu(A2 n B)
/// in exact rational arithmetic.
inline bool classical_independence(const SpacePtr& space, const Partition& e1,
                                   const Partition& e2, const Partition& g,
                                   std::size_t cap = kOracleBlockCap) {
    require_same_space(space, e1.space(), "classical_independence");
    require_same_space(space, e2.space(), "classical_independence");
    require_same_space(space, g.space(), "classical_independence");
    if (e1.block_count() > cap || e2.block_count() > cap)
        throw CapError("classical_independence: block count exceeds cap of " +
                       std::to_string(cap));

    const std::size_t k1 = e1.block_count(), k2 = e2.block_count();

    for (const auto& g_block : g.blocks()) {
        Rat mu_b = 0;
        for (std::size_t atom : g_block) mu_b += space->weight(atom);
        // Per-atom membership masks restricted to this G-block.
        std::vector<Rat> mass1(k1, Rat(0)), mass2(k2, Rat(0));
        Matrix joint(k1, k2);
        for (std::size_t atom : g_block) {
            mass1[e1.block_of(atom)] += space->weight(atom);
            mass2[e2.block_of(atom)] += space->weight(atom);
            joint.at(e1.block_of(atom), e2.block_of(atom)) += space->weight(atom);
        }
        for (std::uint64_t m1 = 0; m1 < (std::uint64_t{1} << k1); ++m1) {
            Rat mu_a1 = 0;
            std::vector<bool> sel1(k1);
            for (std::size_t b = 0; b < k1; ++b)
                if ((sel1[b] = (m1 >> b) & 1)) mu_a1 += mass1[b];
            for (std::uint64_t m2 = 0; m2 < (std::uint64_t{1} << k2); ++m2) {
                Rat mu_a2 = 0, mu_a12 = 0;
                for (std::size_t c = 0; c < k2; ++c) {
                    if (!((m2 >> c) & 1)) continue;
                    mu_a2 += mass2[c];
                    for (std::size_t b = 0; b < k1; ++b)
                        if (sel1[b]) mu_a12 += joint.at(b, c);
                }
                if (mu_a12 * mu_b != mu_a1 * mu_a2) return false;
            }
        }
    }
    return true;
}

/// The mu-weighted orthogonal projection onto the subspace of F-measurable
/// vectors, computed by solving the normal equations exactly: Gram matrix of
/// the block indicators against each standard basis vector. Must coincide
/// with the block-average conditional expectation matrix.
inline Matrix projection_matrix(const SpacePtr& space, const Partition& f) {
    require_same_space(space, f.space(), "projection_matrix");
    const std::size_t n = space->size();
    const std::size_t k = f.block_count();

    Matrix gram(k, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l) {
            Rat acc = 0;
            for (std::size_t atom = 0; atom < n; ++atom) {
                bool in_j = f.block_of(atom) == j;
                bool in_l = f.block_of(atom) == l;
                if (in_j && in_l) acc += space->weight(atom);
            }
            gram.at(j, l) = acc;
        }

    Matrix result(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<Rat> rhs(k, Rat(0));
        for (std::size_t j = 0; j < k; ++j)
            if (f.block_of(col) == j) rhs[j] = space->weight(col);
        LinearSolution sol = solve_linear(gram, rhs);
        if (!sol.consistent || !sol.unique)
            throw Error("projection_matrix: normal equations degenerate");
        for (std::size_t atom = 0; atom < n; ++atom)
            result.at(atom, col) = sol.x[f.block_of(atom)];
    }
    return result;
}

}  // namespace rieszprob::oracle
