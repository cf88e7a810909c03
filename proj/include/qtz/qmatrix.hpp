#pragma once

#include <vector>

#include "qtz/cmat.hpp"
#include "qtz/quaternion.hpp"

namespace qtz {

/// Dense quaternion matrix in split-complex storage: Q = d + j*c, entry
/// (r,c) = from_pair(d(r,c), c(r,c)).
struct QMatrix {
    int rows = 0, cols = 0;
    CMat d, c;

    QMatrix() = default;
    QMatrix(int r, int c_) : rows(r), cols(c_), d(r, c_), c(r, c_) {}
    QMatrix(CMat d_, CMat c_);

    Quaternion q(int r, int c_) const { return from_pair({d(r, c_), c(r, c_)}); }
    void set(int r, int c_, Quaternion v) {
        const ComplexPair p = to_pair(v);
        d(r, c_) = p.c1;
        c(r, c_) = p.c2;
    }

    static QMatrix identity(int n);
};

QMatrix operator+(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a, const QMatrix& b);
QMatrix operator*(const QMatrix& a, double s);

/// Split-formula product: (Ad*Bd - conj(Ac)*Bc) + j*(conj(Ad)*Bc + Ac*Bd).
QMatrix mat_mul(const QMatrix& a, const QMatrix& b);
/// Conjugate transpose: d' = d^H, c' = -c^T (transpose without conjugation).
QMatrix mat_ct(const QMatrix& a);

double fro_norm(const QMatrix& a);
double max_qnorm(const QMatrix& a);

/// 2r x 2c complex representation [[d, -conj(c)], [c, conj(d)]]; it is a ring
/// homomorphism and commutes with conjugate transposition.
CMat complex_adjoint(const QMatrix& a);
/// Reads E + jF back out of the left block column. When validate is set, the
/// block symmetry must hold within tol_struct * ||M||_F.
QMatrix adjoint_extract(const CMat& m, bool validate = true, double tol_struct = 1e-12);

/// Inverse via the complex adjoint. Throws Singular on rank deficiency.
QMatrix minv(const QMatrix& a, double tol_pivot = 1e-13);
/// Solves A X = B through one adjoint factorization.
QMatrix qsolve(const QMatrix& a, const QMatrix& b, double tol_pivot = 1e-13);

struct MSvd {
    QMatrix U;              // rows x rows, unitary
    std::vector<double> S;  // min(rows, cols), descending
    QMatrix V;              // cols x cols, unitary
};

/// One-sided Jacobi SVD in quaternion arithmetic. Column phases are fixed so
/// the first significant entry of each left singular vector is real positive.
/// tol is the relative Gram-orthogonality threshold of the sweep.
MSvd msvd(const QMatrix& a, int max_sweeps = 60, double tol = 1e-14);

struct MPolar {
    QMatrix U;  // unitary factor (rotation)
    QMatrix H;  // Hermitian PSD factor (stretch)
};

MPolar mpolar_right(const QMatrix& a);  // a = U * H
MPolar mpolar_left(const QMatrix& a);   // a = H * U

struct MPlu {
    std::vector<int> perm;  // row i of P*A is row perm[i] of A
    QMatrix L;              // unit lower-triangular
    QMatrix U;              // upper-triangular
};

/// Gaussian elimination with partial pivoting by quaternion norm (ties take
/// the smallest row index); multipliers act from the left, l = a_ik * a_kk^-1.
MPlu mplu(const QMatrix& a, double tol_pivot = 1e-13);
/// Pivot-free variant; throws ZeroPivot at the first vanishing leading pivot.
void mlu(const QMatrix& a, QMatrix& l, QMatrix& u, double tol_pivot = 1e-13);

/// 0/1 real matrix with row i of perm_matrix(p)*A equal to row p[i] of A.
QMatrix perm_matrix(const std::vector<int>& perm);

bool is_hermitian(const QMatrix& a, double tol = 1e-10);
bool is_unitary(const QMatrix& a, double tol = 1e-10);
/// Hermitian within tol plus min eigenvalue of the complex adjoint
/// >= -tol * ||a||_F.
bool is_psd(const QMatrix& a, double tol = 1e-10);

}  // namespace qtz
