#pragma once

#include <complex>
#include <vector>

#include "qtz/errors.hpp"

namespace qtz {

using cxd = std::complex<double>;

/// Dense row-major complex matrix. All dense complex kernels in this project
/// (multiply, LU solve/inverse, Jacobi eigenvalues) run on this type.
struct CMat {
    int rows = 0, cols = 0;
    std::vector<cxd> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    cxd& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const cxd& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
    cxd* row(int r) { return a.data() + static_cast<size_t>(r) * cols; }
    const cxd* row(int r) const { return a.data() + static_cast<size_t>(r) * cols; }

    static CMat identity(int n);
};

namespace kern {
// C += alpha * op(A) * B with op = elementwise conjugation when conj_a.
// Row-major, arbitrary leading dimensions. alpha of +1/-1 stays in the
// vectorized path; other values go through a scalar epilogue.
void zgemm(int m, int n, int k, cxd alpha, const cxd* A, int lda, bool conj_a, const cxd* B,
           int ldb, cxd* C, int ldc);
// y += alpha * x over n entries.
void zaxpy(int n, cxd alpha, const cxd* x, cxd* y);
}  // namespace kern

CMat matmul(const CMat& A, const CMat& B, bool conj_a = false);
void gemm_acc(CMat& C, cxd alpha, const CMat& A, const CMat& B, bool conj_a = false);

CMat transpose(const CMat& A);
CMat conjugate(const CMat& A);
CMat ctranspose(const CMat& A);
double fro_norm(const CMat& A);
double max_abs(const CMat& A);

/// In-place blocked LU with partial pivoting; piv[j] is the row exchanged
/// with j at step j. Throws Singular when the best pivot of some column has
/// modulus <= tol_pivot * max|A|.
void lu_factor(CMat& A, std::vector<int>& piv, double tol_pivot = 1e-13);
/// B := A^{-1} B given lu_factor output.
void lu_solve(const CMat& LU, const std::vector<int>& piv, CMat& B);
/// Inverse via LU; consumes its argument.
CMat inverse(CMat A, double tol_pivot = 1e-13);

/// Eigenvalues of a Hermitian matrix (two-sided Jacobi), ascending.
std::vector<double> hermitian_eigenvalues(CMat A, int max_sweeps = 100);

}  // namespace qtz
