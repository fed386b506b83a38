#include "loglm/tensor.hpp"

namespace loglm {

// (i,k,j) loop order: streams rows of B and accumulates into the output row.
// For each out(i,j) the k terms are still added in ascending order, identical
// to the naive (i,j,k) triple loop, so the two produce bit-equal results.
void matmul_into(Tensor& out, const Tensor& a, const Tensor& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: inner dimensions disagree");
    const int m = a.rows(), k = a.cols(), n = b.cols();
    if (out.rows() != m || out.cols() != n) out = Tensor(m, n);
    else out.zero();
    for (int i = 0; i < m; ++i) {
        Real* out_row = out.row_ptr(i);
        const Real* a_row = a.row_ptr(i);
        for (int kk = 0; kk < k; ++kk) {
            const Real aik = a_row[kk];
            if (aik == Real(0)) continue;
            const Real* b_row = b.row_ptr(kk);
            for (int j = 0; j < n; ++j) out_row[j] += aik * b_row[j];
        }
    }
}

void matmul_nt_into(Tensor& out, const Tensor& a, const Tensor& b) {
    if (a.cols() != b.cols())
        throw DimensionError("matmul_nt: inner dimensions disagree");
    const int m = a.rows(), k = a.cols(), n = b.rows();
    if (out.rows() != m || out.cols() != n) out = Tensor(m, n);
    for (int i = 0; i < m; ++i) {
        const Real* a_row = a.row_ptr(i);
        Real* out_row = out.row_ptr(i);
        for (int j = 0; j < n; ++j) {
            const Real* b_row = b.row_ptr(j);
            Real acc = 0;
            for (int kk = 0; kk < k; ++kk) acc += a_row[kk] * b_row[kk];
            out_row[j] = acc;
        }
    }
}

void matmul_tn_into(Tensor& out, const Tensor& a, const Tensor& b) {
    if (a.rows() != b.rows())
        throw DimensionError("matmul_tn: inner dimensions disagree");
    const int m = a.cols(), k = a.rows(), n = b.cols();
    if (out.rows() != m || out.cols() != n) out = Tensor(m, n);
    else out.zero();
    for (int kk = 0; kk < k; ++kk) {
        const Real* a_row = a.row_ptr(kk);
        const Real* b_row = b.row_ptr(kk);
        for (int i = 0; i < m; ++i) {
            const Real aki = a_row[i];
            if (aki == Real(0)) continue;
            Real* out_row = out.row_ptr(i);
            for (int j = 0; j < n; ++j) out_row[j] += aki * b_row[j];
        }
    }
}

} // namespace loglm
