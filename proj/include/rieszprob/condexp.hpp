#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rieszprob/band.hpp"
#include "rieszprob/element.hpp"
#include "rieszprob/errors.hpp"
#include "rieszprob/linalg.hpp"
#include "rieszprob/partition.hpp"
#include "rieszprob/sample_space.hpp"

namespace rieszprob {

/// Conditional expectation operator: the weight-preserving block average over
/// a partition. Positive, idempotent, strictly positive (weights are > 0),
/// maps weak order units to weak order units, and fixes exactly the elements
/// constant on its blocks. Order continuity is automatic in finite dimension.
///
/// The partition is the semantic identity (the range subspace); the matrix is
/// the derived computational form, built eagerly since spaces are small.
class CondExp {
public:
    CondExp(SpacePtr space, Partition partition)
        : space_(std::move(space)), partition_(std::move(partition)), matrix_(space_->size(), space_->size()) {
        require_same_space(space_, partition_.space(), "conditional expectation");
        block_measures_.reserve(partition_.block_count());
        for (const auto& block : partition_.blocks()) {
            Rat m = 0;
            for (std::size_t atom : block) m += space_->weight(atom);
            block_measures_.push_back(m);
        }
        for (std::size_t b = 0; b < partition_.block_count(); ++b)
            for (std::size_t row : partition_.blocks()[b])
                for (std::size_t col : partition_.blocks()[b])
                    matrix_.at(row, col) = space_->weight(col) / block_measures_[b];
    }

    static CondExp trivial(SpacePtr space) {
        Partition p = Partition::trivial(space);
        return CondExp(std::move(space), std::move(p));
    }
    static CondExp identity(SpacePtr space) {
        Partition p = Partition::discrete(space);
        return CondExp(std::move(space), std::move(p));
    }

    const SpacePtr& space() const { return space_; }
    const Partition& partition() const { return partition_; }
    const Matrix& matrix() const { return matrix_; }
    const Rat& block_measure(std::size_t b) const { return block_measures_[b]; }

    /// Block-average application: on each block B the result is
    /// sum_{w in B} mu(w) f(w) / mu(B). O(n), not a matrix product.
    Element apply(const Element& f) const {
        require_same_space(space_, f.space(), "conditional expectation");
        std::vector<Rat> out(space_->size());
        for (std::size_t b = 0; b < partition_.block_count(); ++b) {
            Rat acc = 0;
            for (std::size_t atom : partition_.blocks()[b])
                acc += space_->weight(atom) * f[atom];
            acc /= block_measures_[b];
            for (std::size_t atom : partition_.blocks()[b]) out[atom] = acc;
        }
        return Element(space_, std::move(out));
    }

    /// Whether f lies in R(T).
    bool fixes(const Element& f) const { return is_measurable(f, partition_); }

    bool operator==(const CondExp& other) const {
        return same_space(space_, other.space_) && partition_ == other.partition_;
    }
    bool operator!=(const CondExp& other) const { return !(*this == other); }

private:
    SpacePtr space_;
    Partition partition_;
    Matrix matrix_;
    std::vector<Rat> block_measures_;
};

/// The unique conditional expectation with range the subspace of F,
/// commuting with T: in the finite model, the block average over F.
/// Requires R(T) contained in F, i.e. F refines T's partition.
inline CondExp condexp_onto(const CondExp& t, const Partition& f) {
    if (!f.refines(t.partition()))
        throw DomainError("condexp_onto: range does not contain R(T)");
    return CondExp(t.space(), f);
}

/// TP = PT as exact matrix identities. Equivalent to P's support being a
/// union of T-blocks (the Qe in R(T), Q = P_{Qe} correspondence); the
/// equivalence is cross-checked in tests, not assumed here.
inline bool commutes(const CondExp& t, const BandProjection& p) {
    require_same_space(t.space(), p.space(), "commutes");
    Matrix pm = to_matrix(p);
    return t.matrix() * pm == pm * t.matrix();
}

/// Structured outcome of checking an arbitrary matrix against the
/// conditional-expectation axioms. `ok()` is the verdict; strict positivity
/// is reported separately because the axioms do not require it.
struct AxiomReport {
    bool positive = false;
    bool idempotent = false;
    bool unit_to_unit = false;
    bool range_is_partition_subspace = false;
    bool strictly_positive = false;
    std::optional<Partition> range_partition;
    std::vector<std::string> failures;
    // In finite dimension every positive linear operator is order continuous;
    // recorded rather than tested.
    static constexpr const char* order_continuity = "automatic (finite dimension)";

    bool ok() const {
        return positive && idempotent && unit_to_unit && range_is_partition_subspace;
    }
};

/// Checks the conditional-expectation axioms for a square matrix: positivity
/// (entrywise, equivalent to positivity on the cone), idempotence, mapping
/// weak order units to weak order units (tested on the constant-one unit,
/// which settles all units), and the range being the subspace of a partition
/// (closed under lattice operations). Never throws; failures are named.
inline AxiomReport verify_axioms(const Matrix& m, const SpacePtr& space) {
    AxiomReport report;
    const std::size_t n = space->size();
    if (m.rows() != n || m.cols() != n)
        throw StructureError("verify_axioms: matrix is not atom-dimensioned");

    report.positive = true;
    for (std::size_t i = 0; i < n && report.positive; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m.at(i, j) < 0) {
                report.positive = false;
                report.failures.push_back("positivity");
                break;
            }

    report.idempotent = (m * m == m);
    if (!report.idempotent) report.failures.push_back("idempotence");

    report.unit_to_unit = true;
    for (std::size_t i = 0; i < n; ++i) {
        Rat row_sum = 0;
        for (std::size_t j = 0; j < n; ++j) row_sum += m.at(i, j);
        if (row_sum <= 0) {
            report.unit_to_unit = false;
            report.failures.push_back("unit preservation");
            break;
        }
    }

    if (report.positive) {
        report.strictly_positive = true;
        for (std::size_t j = 0; j < n && report.strictly_positive; ++j) {
            bool column_hit = false;
            for (std::size_t i = 0; i < n; ++i)
                if (m.at(i, j) > 0) {
                    column_hit = true;
                    break;
                }
            report.strictly_positive = column_hit;
        }
    }

    // Range subspace: atoms with identical matrix rows see every element of
    // the range identically, so group by rows; the range is a partition
    // subspace iff its dimension fills that grouping.
    std::vector<std::vector<Rat>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].reserve(n);
        for (std::size_t j = 0; j < n; ++j) rows[i].push_back(m.at(i, j));
    }
    Partition by_rows = Partition::from_labels(space, rows);
    report.range_is_partition_subspace = (m.rank() == by_rows.block_count());
    if (report.range_is_partition_subspace)
        report.range_partition = by_rows;
    else
        report.failures.push_back("range is not a partition subspace");

    return report;
}

/// Eq-style Radon-Nikodym identity: T P f == T P T_F f for every band
/// projection P acting inside F's subspace. Requires R(T) in R(T_F).
inline bool verify_radon_nikodym(const CondExp& t, const CondExp& t_f, const Element& f,
                                 std::size_t cap = kEnumBlockCap) {
    if (!t_f.partition().refines(t.partition()))
        throw DomainError("verify_radon_nikodym: R(T) not contained in R(T_F)");
    Element tf = t_f.apply(f);
    for (const BandProjection& p : enumerate_band_projections(t_f.partition(), cap)) {
        if (t.apply(p.apply(f)) != t.apply(p.apply(tf))) return false;
    }
    return true;
}

struct RadonNikodymSolve {
    bool unique = false;
    Element solution;  // meaningful when unique
};

/// Solves the Radon-Nikodym system for g in the subspace of F with
/// T P g = T P f for all band projections P with Pe in F. By linearity the
/// single-block projections span the full enumerated constraint set, so the
/// system is assembled from them: unknowns are g's block values, one equation
/// per (F-block, T-block) pair.
inline RadonNikodymSolve radon_nikodym_solve(const CondExp& t, const Partition& f_part,
                                             const Element& f) {
    if (!f_part.refines(t.partition()))
        throw DomainError("radon_nikodym_solve: R(T) not contained in F");
    const std::size_t k = f_part.block_count();
    const auto& t_blocks = t.partition().blocks();
    Matrix a(k * t_blocks.size(), k);
    std::vector<Rat> rhs(k * t_blocks.size(), Rat(0));
    for (std::size_t p = 0; p < k; ++p) {
        Element pf = f_part.block_projection(p).apply(f);
        Element tpf = t.apply(pf);
        for (std::size_t tb = 0; tb < t_blocks.size(); ++tb) {
            std::size_t row = p * t_blocks.size() + tb;
            // T maps chi_{F_p}-supported mass into T-block tb with weight
            // mu(F_p ∩ T_tb)/mu(T_tb); the unknown block value scales it.
            Rat overlap = 0;
            for (std::size_t atom : f_part.blocks()[p])
                if (t.partition().block_of(atom) == tb) overlap += t.space()->weight(atom);
            a.at(row, p) = overlap / t.block_measure(tb);
            rhs[row] = tpf[t_blocks[tb].front()];
        }
    }
    LinearSolution sol = solve_linear(std::move(a), std::move(rhs));
    RadonNikodymSolve out{false, Element::zero(t.space())};
    if (!sol.consistent) return out;
    out.unique = sol.unique;
    std::vector<Rat> values(t.space()->size());
    for (std::size_t b = 0; b < k; ++b)
        for (std::size_t atom : f_part.blocks()[b]) values[atom] = sol.x[b];
    out.solution = Element(t.space(), std::move(values));
    return out;
}

}  // namespace rieszprob
