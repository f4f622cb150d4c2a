#include "lcc/linop.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "lcc/parallel.hpp"
#include "lcc/rng.hpp"

namespace lcc {

namespace {

void build_csr(std::uint64_t rows, std::vector<Triplet>& e, std::vector<std::uint64_t>& ptr,
               std::vector<std::uint64_t>& col, std::vector<double>& val) {
    std::sort(e.begin(), e.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    ptr.assign(rows + 1, 0);
    col.clear();
    val.clear();
    for (std::size_t i = 0; i < e.size();) {
        std::size_t j = i;
        double s = 0;
        while (j < e.size() && e[j].row == e[i].row && e[j].col == e[i].col) s += e[j++].value;
        if (s != 0) {
            col.push_back(e[i].col);
            val.push_back(s);
            ++ptr[e[i].row + 1];
        }
        i = j;
    }
    for (std::uint64_t r = 0; r < rows; ++r) ptr[r + 1] += ptr[r];
}

void csr_apply(std::uint64_t rows, const std::vector<std::uint64_t>& ptr, const std::vector<std::uint64_t>& col,
               const std::vector<double>& val, std::span<const double> x, std::span<double> y) {
    constexpr std::uint64_t kBlock = 4096;
    const std::size_t nb = static_cast<std::size_t>((rows + kBlock - 1) / kBlock);
    for_blocks(nb, default_threads(), [&](std::size_t b) {
        const std::uint64_t end = std::min<std::uint64_t>(rows, (b + 1) * kBlock);
        for (std::uint64_t r = b * kBlock; r < end; ++r) {
            double s = 0;
            for (std::uint64_t k = ptr[r]; k < ptr[r + 1]; ++k) s += val[k] * x[col[k]];
            y[r] = s;
        }
    });
}

double norm2(const std::vector<double>& v) {
    long double s = 0;
    for (double a : v) s += static_cast<long double>(a) * a;
    return std::sqrt(static_cast<double>(s));
}

}  // namespace

SparseMatrix::SparseMatrix(std::uint64_t rows, std::uint64_t cols, std::vector<Triplet> e) : rows_(rows), cols_(cols) {
    for (const auto& t : e)
        if (t.row >= rows || t.col >= cols) throw std::out_of_range("SparseMatrix: entry out of range");
    std::vector<Triplet> te;
    te.reserve(e.size());
    for (const auto& t : e) te.push_back({t.col, t.row, t.value});
    build_csr(rows, e, row_ptr_, col_, values_);
    build_csr(cols, te, t_row_ptr_, t_col_, t_values_);
}

void SparseMatrix::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != cols_ || y.size() != rows_) throw std::invalid_argument("SparseMatrix::apply: size mismatch");
    csr_apply(rows_, row_ptr_, col_, values_, x, y);
}

void SparseMatrix::apply_transpose(std::span<const double> x, std::span<double> y) const {
    if (x.size() != rows_ || y.size() != cols_)
        throw std::invalid_argument("SparseMatrix::apply_transpose: size mismatch");
    csr_apply(cols_, t_row_ptr_, t_col_, t_values_, x, y);
}

std::vector<Triplet> SparseMatrix::triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::uint64_t r = 0; r < rows_; ++r)
        for (std::uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out.push_back({r, col_[k], values_[k]});
    return out;
}

std::size_t SparseMatrix::max_row_degree() const {
    std::size_t m = 0;
    for (std::uint64_t r = 0; r < rows_; ++r) m = std::max(m, row_degree(r));
    return m;
}

std::size_t SparseMatrix::max_col_degree() const {
    std::size_t m = 0;
    for (std::uint64_t c = 0; c < cols_; ++c) m = std::max(m, col_degree(c));
    return m;
}

double SparseMatrix::sum_abs() const {
    double s = 0;
    for (double v : values_) s += std::abs(v);
    return s;
}

double SparseMatrix::at(std::uint64_t r, std::uint64_t c) const {
    auto b = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
    auto e = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
    auto it = std::lower_bound(b, e, c);
    return (it != e && *it == c) ? values_[static_cast<std::size_t>(it - col_.begin())] : 0.0;
}

SparseMatrix SparseMatrix::transposed() const {
    std::vector<Triplet> e;
    e.reserve(nnz());
    for (const auto& t : triplets()) e.push_back({t.col, t.row, t.value});
    return SparseMatrix(cols_, rows_, std::move(e));
}

SparseMatrix SparseMatrix::without(const std::vector<char>& row_mask, const std::vector<char>& col_mask) const {
    if (row_mask.size() != rows_ || col_mask.size() != cols_) throw std::invalid_argument("SparseMatrix::without: mask size");
    std::vector<Triplet> e;
    for (const auto& t : triplets())
        if (!row_mask[t.row] && !col_mask[t.col]) e.push_back(t);
    return SparseMatrix(rows_, cols_, std::move(e));
}

std::vector<double> SparseMatrix::dense() const {
    std::vector<double> d(rows_ * cols_, 0.0);
    for (const auto& t : triplets()) d[t.row * cols_ + t.col] = t.value;
    return d;
}

void write_coo(std::ostream& os, const SparseMatrix& m) {
    for (const auto& t : m.triplets()) os << t.row << ' ' << t.col << ' ' << t.value << '\n';
}

PowerResult power_iteration(const LinearOperator& a, double tol, std::size_t max_iter, std::uint64_t seed) {
    PowerResult res;
    const std::size_t n = static_cast<std::size_t>(a.cols());
    const std::size_t m = static_cast<std::size_t>(a.rows());
    if (n == 0 || m == 0) {
        res.converged = true;
        return res;
    }
    Rng rng(derive_seed(seed, "power_iteration"));
    std::vector<double> v(n), av(m), w(n);
    for (auto& x : v) x = rng.uniform() - 0.5;
    double nv = norm2(v);
    for (auto& x : v) x /= nv;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        a.apply(v, av);
        a.apply_transpose(av, w);
        double lambda = 0;
        for (std::size_t i = 0; i < n; ++i) lambda += v[i] * w[i];
        res.iterations = it;
        double rs = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = w[i] - lambda * v[i];
            rs += d * d;
        }
        res.sigma = std::sqrt(std::max(lambda, 0.0));
        res.residual = lambda > 0 ? std::sqrt(rs) / lambda : 0;
        double nw = norm2(w);
        if (nw == 0) {
            res.converged = true;
            return res;
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
        if (res.residual <= tol) {
            res.converged = true;
            // One more Rayleigh quotient on the normalized iterate.
            a.apply(v, av);
            double s = 0;
            for (double x : av) s += x * x;
            res.sigma = std::sqrt(s);
            return res;
        }
    }
    return res;
}

}  // namespace lcc
