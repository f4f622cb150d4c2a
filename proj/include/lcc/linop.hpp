#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace lcc {

class LinearOperator {
public:
    virtual ~LinearOperator() = default;
    virtual std::uint64_t rows() const = 0;
    virtual std::uint64_t cols() const = 0;
    // y = A x (y has rows() entries).
    virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
    // y = A^T x (y has cols() entries).
    virtual void apply_transpose(std::span<const double> x, std::span<double> y) const = 0;
};

struct Triplet {
    std::uint64_t row, col;
    double value;
};

// Compressed sparse rows with a transposed copy, so that both products are
// row-parallel and deterministic.
class SparseMatrix : public LinearOperator {
public:
    SparseMatrix() = default;
    // Duplicate coordinates are summed; resulting zeros are dropped.
    SparseMatrix(std::uint64_t rows, std::uint64_t cols, std::vector<Triplet> entries);

    std::uint64_t rows() const override { return rows_; }
    std::uint64_t cols() const override { return cols_; }
    std::size_t nnz() const { return values_.size(); }
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_transpose(std::span<const double> x, std::span<double> y) const override;

    std::vector<Triplet> triplets() const;  // sorted by (row, col)
    std::size_t row_degree(std::uint64_t r) const { return row_ptr_[r + 1] - row_ptr_[r]; }
    std::size_t col_degree(std::uint64_t c) const { return t_row_ptr_[c + 1] - t_row_ptr_[c]; }
    std::size_t max_row_degree() const;
    std::size_t max_col_degree() const;
    double sum_abs() const;
    double at(std::uint64_t r, std::uint64_t c) const;

    SparseMatrix transposed() const;
    // Zeroes every row r with row_mask[r] and every column c with col_mask[c].
    SparseMatrix without(const std::vector<char>& row_mask, const std::vector<char>& col_mask) const;
    // Row-major dense copy (rows*cols doubles).
    std::vector<double> dense() const;

    const std::vector<std::uint64_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::uint64_t>& col_index() const { return col_; }
    const std::vector<double>& values() const { return values_; }

    bool operator==(const SparseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && row_ptr_ == o.row_ptr_ && col_ == o.col_ &&
               values_ == o.values_;
    }

private:
    std::uint64_t rows_ = 0, cols_ = 0;
    std::vector<std::uint64_t> row_ptr_{0}, col_;
    std::vector<double> values_;
    std::vector<std::uint64_t> t_row_ptr_{0}, t_col_;
    std::vector<double> t_values_;
};

// "row col value" lines, sorted, for golden files.
void write_coo(std::ostream& os, const SparseMatrix& m);

struct PowerResult {
    double sigma = 0;     // largest singular value estimate
    double residual = 0;  // ||A^T A v - s^2 v|| / s^2 at the last iterate
    std::size_t iterations = 0;
    bool converged = false;
};

// Power iteration on A^T A from a seeded random start. Stops once the
// relative residual drops below tol.
PowerResult power_iteration(const LinearOperator& a, double tol = 1e-6, std::size_t max_iter = 20000,
                            std::uint64_t seed = 1);

}  // namespace lcc
