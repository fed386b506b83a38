#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "loglm/errors.hpp"

namespace loglm {

// All arithmetic runs in 64-bit precision so finite-difference checks stay
// meaningful. A 32-bit build only needs this alias changed.
using Real = double;

// Dense row-major matrix. Row vectors are 1xN tensors, scalars 1x1. Tensors
// are written once by their producing op and treated as immutable afterwards,
// which makes read-only sharing across threads safe.
class Tensor {
public:
    Tensor() = default;

    Tensor(int rows, int cols) : rows_(rows), cols_(cols), data_(check_extents(rows, cols)) {}

    // 1xN row vector from values, handy in tests and small constructions.
    static Tensor row_vector(std::initializer_list<Real> vals) {
        Tensor t(1, static_cast<int>(vals.size()));
        int i = 0;
        for (Real v : vals) t.data_[i++] = v;
        return t;
    }

    static Tensor from_rows(std::initializer_list<std::initializer_list<Real>> rows) {
        const int r = static_cast<int>(rows.size());
        const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
        Tensor t(r, c);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != c)
                throw DimensionError("from_rows: ragged initializer");
            for (Real v : row) t.data_[i++] = v;
        }
        return t;
    }

    static Tensor scalar(Real v) {
        Tensor t(1, 1);
        t.data_[0] = v;
        return t;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t size() const { return static_cast<std::int64_t>(rows_) * cols_; }
    bool empty() const { return data_.empty(); }

    bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    Real& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    Real at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    Real& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
    Real operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

    Real* data() { return data_.data(); }
    const Real* data() const { return data_.data(); }

    Real* row_ptr(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
    const Real* row_ptr(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

    std::span<const Real> values() const { return {data_.data(), data_.size()}; }

    void fill(Real v) { std::fill(data_.begin(), data_.end(), v); }
    void zero() { fill(Real(0)); }

    bool all_finite() const {
        for (Real v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool operator==(const Tensor& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    static std::vector<Real> check_extents(int rows, int cols) {
        if (rows <= 0 || cols <= 0)
            throw DimensionError("tensor extents must be positive");
        return std::vector<Real>(static_cast<std::size_t>(rows) * cols, Real(0));
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Real> data_;
};

// C = A * B with the accumulation order of the classic triple loop (the k
// index innermost per output element), so results are reproducible and match
// a reference triple-loop implementation bit for bit.
void matmul_into(Tensor& out, const Tensor& a, const Tensor& b);

// C = A * B^T, same accumulation order guarantee.
void matmul_nt_into(Tensor& out, const Tensor& a, const Tensor& b);

// C = A^T * B.
void matmul_tn_into(Tensor& out, const Tensor& a, const Tensor& b);

} // namespace loglm
