#include "qtz/cmat.hpp"

#include <algorithm>
#include <cmath>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

namespace qtz {

CMat CMat::identity(int n) {
    CMat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

namespace kern {

namespace {

// Cache blocking for the k and n dims; the B panel (KC x NC complex) is the
// hot working set.
constexpr int KC = 256;
constexpr int NC = 256;

#if defined(__AVX512F__)

// 4x8 microkernel: 4 rows of C, 8 complex columns held as two zmm vectors.
// Each accumulator pair keeps re(a)*b and im(a)*swap(b) separate; the final
// combine flips the sign of the even (real) lanes of the imaginary part.
template <bool ConjA, bool Neg>
void ukernel_4x8(int kc, const cxd* A, int lda, const cxd* B, int ldb, cxd* C, int ldc) {
    __m512d accR0 = _mm512_setzero_pd(), accR1 = _mm512_setzero_pd();
    __m512d accR2 = _mm512_setzero_pd(), accR3 = _mm512_setzero_pd();
    __m512d accR4 = _mm512_setzero_pd(), accR5 = _mm512_setzero_pd();
    __m512d accR6 = _mm512_setzero_pd(), accR7 = _mm512_setzero_pd();
    __m512d accI0 = _mm512_setzero_pd(), accI1 = _mm512_setzero_pd();
    __m512d accI2 = _mm512_setzero_pd(), accI3 = _mm512_setzero_pd();
    __m512d accI4 = _mm512_setzero_pd(), accI5 = _mm512_setzero_pd();
    __m512d accI6 = _mm512_setzero_pd(), accI7 = _mm512_setzero_pd();

    const double* a0 = reinterpret_cast<const double*>(A);
    const double* a1 = reinterpret_cast<const double*>(A + lda);
    const double* a2 = reinterpret_cast<const double*>(A + 2 * static_cast<size_t>(lda));
    const double* a3 = reinterpret_cast<const double*>(A + 3 * static_cast<size_t>(lda));

    for (int p = 0; p < kc; ++p) {
        const double* brow = reinterpret_cast<const double*>(B + static_cast<size_t>(p) * ldb);
        const __m512d b0 = _mm512_loadu_pd(brow);
        const __m512d b1 = _mm512_loadu_pd(brow + 8);
        const __m512d s0 = _mm512_permute_pd(b0, 0x55);
        const __m512d s1 = _mm512_permute_pd(b1, 0x55);

        __m512d ar, ai;
        ar = _mm512_set1_pd(a0[2 * p]);
        ai = _mm512_set1_pd(ConjA ? -a0[2 * p + 1] : a0[2 * p + 1]);
        accR0 = _mm512_fmadd_pd(ar, b0, accR0);
        accR1 = _mm512_fmadd_pd(ar, b1, accR1);
        accI0 = _mm512_fmadd_pd(ai, s0, accI0);
        accI1 = _mm512_fmadd_pd(ai, s1, accI1);

        ar = _mm512_set1_pd(a1[2 * p]);
        ai = _mm512_set1_pd(ConjA ? -a1[2 * p + 1] : a1[2 * p + 1]);
        accR2 = _mm512_fmadd_pd(ar, b0, accR2);
        accR3 = _mm512_fmadd_pd(ar, b1, accR3);
        accI2 = _mm512_fmadd_pd(ai, s0, accI2);
        accI3 = _mm512_fmadd_pd(ai, s1, accI3);

        ar = _mm512_set1_pd(a2[2 * p]);
        ai = _mm512_set1_pd(ConjA ? -a2[2 * p + 1] : a2[2 * p + 1]);
        accR4 = _mm512_fmadd_pd(ar, b0, accR4);
        accR5 = _mm512_fmadd_pd(ar, b1, accR5);
        accI4 = _mm512_fmadd_pd(ai, s0, accI4);
        accI5 = _mm512_fmadd_pd(ai, s1, accI5);

        ar = _mm512_set1_pd(a3[2 * p]);
        ai = _mm512_set1_pd(ConjA ? -a3[2 * p + 1] : a3[2 * p + 1]);
        accR6 = _mm512_fmadd_pd(ar, b0, accR6);
        accR7 = _mm512_fmadd_pd(ar, b1, accR7);
        accI6 = _mm512_fmadd_pd(ai, s0, accI6);
        accI7 = _mm512_fmadd_pd(ai, s1, accI7);
    }

    // negate real lanes of the im(a)*swap(b) parts: re -= im(a)im(b), im += im(a)re(b)
    const __m512d signs = _mm512_set_pd(0.0, -0.0, 0.0, -0.0, 0.0, -0.0, 0.0, -0.0);
    const auto combine = [&](__m512d r, __m512d i) { return _mm512_add_pd(r, _mm512_xor_pd(i, signs)); };
    const auto apply = [&](double* c, __m512d r, __m512d i) {
        const __m512d v = combine(r, i);
        const __m512d old = _mm512_loadu_pd(c);
        _mm512_storeu_pd(c, Neg ? _mm512_sub_pd(old, v) : _mm512_add_pd(old, v));
    };

    double* c0 = reinterpret_cast<double*>(C);
    double* c1 = reinterpret_cast<double*>(C + ldc);
    double* c2 = reinterpret_cast<double*>(C + 2 * static_cast<size_t>(ldc));
    double* c3 = reinterpret_cast<double*>(C + 3 * static_cast<size_t>(ldc));
    apply(c0, accR0, accI0);
    apply(c0 + 8, accR1, accI1);
    apply(c1, accR2, accI2);
    apply(c1 + 8, accR3, accI3);
    apply(c2, accR4, accI4);
    apply(c2 + 8, accR5, accI5);
    apply(c3, accR6, accI6);
    apply(c3 + 8, accR7, accI7);
}

#endif  // __AVX512F__

// Scalar reference path; also covers the tile remainders of the SIMD path.
template <bool ConjA, bool Neg>
void block_scalar(int mb, int nb, int kc, const cxd* A, int lda, const cxd* B, int ldb, cxd* C,
                  int ldc) {
    for (int i = 0; i < mb; ++i) {
        const cxd* arow = A + static_cast<size_t>(i) * lda;
        cxd* crow = C + static_cast<size_t>(i) * ldc;
        for (int p = 0; p < kc; ++p) {
            cxd av = ConjA ? std::conj(arow[p]) : arow[p];
            if (Neg) av = -av;
            const double ar = av.real(), ai = av.imag();
            if (ar == 0.0 && ai == 0.0) continue;
            const double* brow = reinterpret_cast<const double*>(B + static_cast<size_t>(p) * ldb);
            double* cr = reinterpret_cast<double*>(crow);
            for (int j = 0; j < nb; ++j) {
                const double br = brow[2 * j], bi = brow[2 * j + 1];
                cr[2 * j] += ar * br - ai * bi;
                cr[2 * j + 1] += ar * bi + ai * br;
            }
        }
    }
}

template <bool ConjA, bool Neg>
void zgemm_unit(int m, int n, int kc, const cxd* A, int lda, const cxd* B, int ldb, cxd* C,
                int ldc) {
#if defined(__AVX512F__)
    const int m4 = m - m % 4;
    const int n8 = n - n % 8;
    for (int i = 0; i < m4; i += 4)
        for (int j = 0; j < n8; j += 8)
            ukernel_4x8<ConjA, Neg>(kc, A + static_cast<size_t>(i) * lda, lda, B + j, ldb,
                                    C + static_cast<size_t>(i) * ldc + j, ldc);
    if (n8 < n)
        block_scalar<ConjA, Neg>(m4, n - n8, kc, A, lda, B + n8, ldb, C + n8, ldc);
    if (m4 < m)
        block_scalar<ConjA, Neg>(m - m4, n, kc, A + static_cast<size_t>(m4) * lda, lda, B, ldb,
                                 C + static_cast<size_t>(m4) * ldc, ldc);
#else
    block_scalar<ConjA, Neg>(m, n, kc, A, lda, B, ldb, C, ldc);
#endif
}

}  // namespace

void zgemm(int m, int n, int k, cxd alpha, const cxd* A, int lda, bool conj_a, const cxd* B,
           int ldb, cxd* C, int ldc) {
    if (m <= 0 || n <= 0 || k <= 0 || alpha == cxd{0.0, 0.0}) return;

    const bool plain = (alpha == cxd{1.0, 0.0});
    const bool neg = (alpha == cxd{-1.0, 0.0});
    if (!plain && !neg) {
        // general alpha: accumulate plain into scratch, then scale-add
        std::vector<cxd> tmp(static_cast<size_t>(m) * n, cxd{0.0, 0.0});
        zgemm(m, n, k, cxd{1.0, 0.0}, A, lda, conj_a, B, ldb, tmp.data(), n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                C[static_cast<size_t>(i) * ldc + j] += alpha * tmp[static_cast<size_t>(i) * n + j];
        return;
    }
    for (int jc = 0; jc < n; jc += NC) {
        const int nb = std::min(NC, n - jc);
        for (int pc = 0; pc < k; pc += KC) {
            const int kb = std::min(KC, k - pc);
            const cxd* Ab = A + pc;
            const cxd* Bb = B + static_cast<size_t>(pc) * ldb + jc;
            cxd* Cb = C + jc;
            if (plain) {
                if (conj_a)
                    zgemm_unit<true, false>(m, nb, kb, Ab, lda, Bb, ldb, Cb, ldc);
                else
                    zgemm_unit<false, false>(m, nb, kb, Ab, lda, Bb, ldb, Cb, ldc);
            } else {
                if (conj_a)
                    zgemm_unit<true, true>(m, nb, kb, Ab, lda, Bb, ldb, Cb, ldc);
                else
                    zgemm_unit<false, true>(m, nb, kb, Ab, lda, Bb, ldb, Cb, ldc);
            }
        }
    }
}

void zaxpy(int n, cxd alpha, const cxd* x, cxd* y) {
    const double ar = alpha.real(), ai = alpha.imag();
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    for (int j = 0; j < n; ++j) {
        const double br = xs[2 * j], bi = xs[2 * j + 1];
        ys[2 * j] += ar * br - ai * bi;
        ys[2 * j + 1] += ar * bi + ai * br;
    }
}

}  // namespace kern

CMat matmul(const CMat& A, const CMat& B, bool conj_a) {
    if (A.cols != B.rows) throw ShapeMismatch("matmul: inner dimensions differ");
    CMat C(A.rows, B.cols);
    kern::zgemm(A.rows, B.cols, A.cols, cxd{1.0, 0.0}, A.a.data(), A.cols, conj_a, B.a.data(),
                B.cols, C.a.data(), C.cols);
    return C;
}

void gemm_acc(CMat& C, cxd alpha, const CMat& A, const CMat& B, bool conj_a) {
    if (A.cols != B.rows || C.rows != A.rows || C.cols != B.cols)
        throw ShapeMismatch("gemm_acc: shapes not conformable");
    kern::zgemm(A.rows, B.cols, A.cols, alpha, A.a.data(), A.cols, conj_a, B.a.data(), B.cols,
                C.a.data(), C.cols);
}

CMat transpose(const CMat& A) {
    CMat T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

CMat conjugate(const CMat& A) {
    CMat R(A.rows, A.cols);
    for (size_t t = 0; t < A.a.size(); ++t) R.a[t] = std::conj(A.a[t]);
    return R;
}

CMat ctranspose(const CMat& A) {
    CMat T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(j, i) = std::conj(A(i, j));
    return T;
}

double fro_norm(const CMat& A) {
    double s = 0.0;
    for (const cxd& v : A.a) s += v.real() * v.real() + v.imag() * v.imag();
    return std::sqrt(s);
}

double max_abs(const CMat& A) {
    double m = 0.0;
    for (const cxd& v : A.a) m = std::max(m, std::abs(v));
    return m;
}

namespace {

constexpr int LU_NB = 64;

// rows k0..k0+kb of B get L(k0:,k0:)^{-1} applied (unit lower diagonal block),
// using the factors stored in LU.
void trsm_block_lower(const CMat& LU, CMat& B, int k0, int kb) {
    for (int i = 1; i < kb; ++i) {
        const cxd* lrow = LU.row(k0 + i);
        cxd* brow = B.row(k0 + i);
        for (int t = 0; t < i; ++t) {
            const cxd l = lrow[k0 + t];
            if (l != cxd{0.0, 0.0}) kern::zaxpy(B.cols, -l, B.row(k0 + t), brow);
        }
    }
}

void trsm_block_upper(const CMat& LU, CMat& B, int k0, int kb) {
    for (int i = kb - 1; i >= 0; --i) {
        const cxd* urow = LU.row(k0 + i);
        cxd* brow = B.row(k0 + i);
        for (int t = i + 1; t < kb; ++t) {
            const cxd u = urow[k0 + t];
            if (u != cxd{0.0, 0.0}) kern::zaxpy(B.cols, -u, B.row(k0 + t), brow);
        }
        const cxd d = cxd{1.0, 0.0} / urow[k0 + i];
        for (int j = 0; j < B.cols; ++j) brow[j] *= d;
    }
}

}  // namespace

void lu_factor(CMat& A, std::vector<int>& piv, double tol_pivot) {
    if (A.rows != A.cols) throw ShapeMismatch("lu_factor: matrix not square");
    const int n = A.rows;
    piv.assign(n, 0);
    const double thresh = tol_pivot * max_abs(A);

    for (int k0 = 0; k0 < n; k0 += LU_NB) {
        const int kb = std::min(LU_NB, n - k0);
        // unblocked panel factorization over columns k0..k0+kb (full-row swaps)
        for (int j = k0; j < k0 + kb; ++j) {
            int p = j;
            double best = std::abs(A(j, j));
            for (int i = j + 1; i < n; ++i) {
                const double v = std::abs(A(i, j));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (!(best > thresh))
                throw Singular("lu_factor: pivot below tolerance at column " + std::to_string(j));
            piv[j] = p;
            if (p != j)
                for (int c = 0; c < n; ++c) std::swap(A(j, c), A(p, c));
            const cxd d = cxd{1.0, 0.0} / A(j, j);
            for (int i = j + 1; i < n; ++i) A(i, j) *= d;
            const int pe = k0 + kb;
            for (int i = j + 1; i < n; ++i) {
                const cxd l = A(i, j);
                if (l == cxd{0.0, 0.0}) continue;
                cxd* arow = A.row(i);
                const cxd* prow = A.row(j);
                for (int c = j + 1; c < pe; ++c) arow[c] -= l * prow[c];
            }
        }
        const int rest = n - (k0 + kb);
        if (rest > 0) {
            // U12 := L11^{-1} A12
            for (int i = 1; i < kb; ++i) {
                cxd* arow = A.row(k0 + i) + k0 + kb;
                for (int t = 0; t < i; ++t) {
                    const cxd l = A(k0 + i, k0 + t);
                    if (l != cxd{0.0, 0.0}) kern::zaxpy(rest, -l, A.row(k0 + t) + k0 + kb, arow);
                }
            }
            // A22 -= L21 * U12
            kern::zgemm(rest, rest, kb, cxd{-1.0, 0.0}, A.row(k0 + kb) + k0, n, false,
                        A.row(k0) + k0 + kb, n, A.row(k0 + kb) + k0 + kb, n);
        }
    }
}

void lu_solve(const CMat& LU, const std::vector<int>& piv, CMat& B) {
    const int n = LU.rows;
    if (B.rows != n) throw ShapeMismatch("lu_solve: rhs row count differs");
    for (int j = 0; j < n; ++j)
        if (piv[j] != j)
            for (int c = 0; c < B.cols; ++c) std::swap(B(j, c), B(piv[j], c));
    // forward: B := L^{-1} B
    for (int k0 = 0; k0 < n; k0 += LU_NB) {
        const int kb = std::min(LU_NB, n - k0);
        trsm_block_lower(LU, B, k0, kb);
        const int rest = n - (k0 + kb);
        if (rest > 0)
            kern::zgemm(rest, B.cols, kb, cxd{-1.0, 0.0}, LU.row(k0 + kb) + k0, n, false,
                        B.row(k0), B.cols, B.row(k0 + kb), B.cols);
    }
    // backward: B := U^{-1} B
    for (int k0 = (n - 1) / LU_NB * LU_NB; k0 >= 0; k0 -= LU_NB) {
        const int kb = std::min(LU_NB, n - k0);
        const int rest = n - (k0 + kb);
        if (rest > 0)
            kern::zgemm(kb, B.cols, rest, cxd{-1.0, 0.0}, LU.row(k0) + k0 + kb, n, false,
                        B.row(k0 + kb), B.cols, B.row(k0), B.cols);
        trsm_block_upper(LU, B, k0, kb);
    }
}

CMat inverse(CMat A, double tol_pivot) {
    const int n = A.rows;
    std::vector<int> piv;
    lu_factor(A, piv, tol_pivot);
    CMat B = CMat::identity(n);
    lu_solve(A, piv, B);
    return B;
}

std::vector<double> hermitian_eigenvalues(CMat A, int max_sweeps) {
    const int n = A.rows;
    if (n != A.cols) throw ShapeMismatch("hermitian_eigenvalues: matrix not square");
    if (n == 0) return {};
    const double anorm = fro_norm(A);
    const double stop = 1e-14 * (anorm > 0.0 ? anorm : 1.0);

    const auto converged = [&] {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(A(p, q));
        return std::sqrt(2.0 * off) <= stop;
    };
    const auto diagonal = [&] {
        std::vector<double> ev(n);
        for (int i = 0; i < n; ++i) ev[i] = A(i, i).real();
        std::sort(ev.begin(), ev.end());
        return ev;
    };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (converged()) return diagonal();
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double r = std::abs(A(p, q));
                if (r <= stop / n) continue;
                const cxd u = A(p, q) / r;
                const double app = A(p, p).real(), aqq = A(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // columns: col_p' = c*col_p - s*conj(u)*col_q ; col_q' = s*u*col_p + c*col_q
                for (int i = 0; i < n; ++i) {
                    const cxd vp = A(i, p), vq = A(i, q);
                    A(i, p) = c * vp - s * std::conj(u) * vq;
                    A(i, q) = s * u * vp + c * vq;
                }
                // rows: row_p' = c*row_p - s*u*row_q ; row_q' = s*conj(u)*row_p + c*row_q
                for (int j = 0; j < n; ++j) {
                    const cxd vp = A(p, j), vq = A(q, j);
                    A(p, j) = c * vp - s * u * vq;
                    A(q, j) = s * std::conj(u) * vp + c * vq;
                }
                A(p, q) = cxd{0.0, 0.0};
                A(q, p) = cxd{0.0, 0.0};
            }
        }
    }
    if (converged()) return diagonal();
    throw NoConvergence("hermitian_eigenvalues: Jacobi sweep budget exhausted");
}

}  // namespace qtz
