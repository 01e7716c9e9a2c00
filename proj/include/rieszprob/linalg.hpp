#pragma once

#include <cstddef>
#include <vector>

#include "rieszprob/band.hpp"
#include "rieszprob/element.hpp"
#include "rieszprob/errors.hpp"
#include "rieszprob/rational.hpp"

namespace rieszprob {

/// Dense exact-rational matrix, row-major. Just enough linear algebra for
/// operator identities and small exact solves; sizes here are atom counts.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static Matrix diagonal(const std::vector<Rat>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }
    bool operator!=(const Matrix& other) const { return !(*this == other); }

    Matrix operator*(const Matrix& other) const {
        if (cols_ != other.rows_) throw StructureError("matrix product dimension mismatch");
        Matrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rat& a = at(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < other.cols_; ++j) {
                    const Rat& b = other.at(k, j);
                    if (b != 0) out.at(i, j) += a * b;
                }
            }
        return out;
    }

    Matrix operator-(const Matrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_)
            throw StructureError("matrix difference dimension mismatch");
        Matrix out(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - other.data_[i];
        return out;
    }

    std::vector<Rat> apply(const std::vector<Rat>& v) const {
        if (v.size() != cols_) throw StructureError("matrix apply dimension mismatch");
        std::vector<Rat> out(rows_, Rat(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (at(i, j) != 0) out[i] += at(i, j) * v[j];
        return out;
    }

    Element apply(const Element& f) const {
        return Element(f.space(), apply(f.values()));
    }

    std::size_t rank() const {
        Matrix m(*this);
        std::size_t r = 0;
        for (std::size_t col = 0; col < cols_ && r < rows_; ++col) {
            std::size_t pivot = SampleSpace::npos;
            for (std::size_t i = r; i < rows_; ++i)
                if (m.at(i, col) != 0) {
                    pivot = i;
                    break;
                }
            if (pivot == SampleSpace::npos) continue;
            m.swap_rows(pivot, r);
            for (std::size_t i = r + 1; i < rows_; ++i) {
                if (m.at(i, col) == 0) continue;
                Rat factor = m.at(i, col) / m.at(r, col);
                for (std::size_t j = col; j < cols_; ++j)
                    m.at(i, j) -= factor * m.at(r, j);
            }
            ++r;
        }
        return r;
    }

    Rat trace() const {
        Rat t = 0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
        return t;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rat> data_;
};

inline Matrix to_matrix(const BandProjection& p) {
    std::vector<Rat> d;
    d.reserve(p.space()->size());
    for (std::size_t i = 0; i < p.space()->size(); ++i) d.push_back(p.contains(i) ? 1 : 0);
    return Matrix::diagonal(d);
}

/// Outcome of an exact linear solve A x = b.
struct LinearSolution {
    bool consistent = false;
    bool unique = false;
    std::vector<Rat> x;  // a particular solution when consistent
    std::size_t rank = 0;
};

/// Exact Gauss-Jordan. A may be rectangular (least constraints redundancy is
/// fine); uniqueness means rank == number of unknowns.
inline LinearSolution solve_linear(Matrix a, std::vector<Rat> b) {
    if (a.rows() != b.size()) throw StructureError("solve_linear: rhs size mismatch");
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t pivot = SampleSpace::npos;
        for (std::size_t i = r; i < rows; ++i)
            if (a.at(i, col) != 0) {
                pivot = i;
                break;
            }
        if (pivot == SampleSpace::npos) continue;
        a.swap_rows(pivot, r);
        std::swap(b[pivot], b[r]);
        Rat inv = a.at(r, col);
        for (std::size_t j = col; j < cols; ++j) a.at(r, j) /= inv;
        b[r] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a.at(i, col) == 0) continue;
            Rat factor = a.at(i, col);
            for (std::size_t j = col; j < cols; ++j) a.at(i, j) -= factor * a.at(r, j);
            b[i] -= factor * b[r];
        }
        pivot_col.push_back(col);
        ++r;
    }
    LinearSolution sol;
    sol.rank = r;
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != 0) return sol;  // inconsistent
    sol.consistent = true;
    sol.unique = (r == cols);
    sol.x.assign(cols, Rat(0));  // free variables pinned to zero
    for (std::size_t k = 0; k < pivot_col.size(); ++k) sol.x[pivot_col[k]] = b[k];
    return sol;
}

}  // namespace rieszprob
