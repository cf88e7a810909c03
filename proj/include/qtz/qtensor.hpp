#pragma once

#include <random>
#include <vector>

#include "qtz/qmatrix.hpp"

namespace qtz {

/// Third-order complex tensor, slice-major storage: entry (i,j,k) sits at
/// (k*n1 + i)*n2 + j so frontal slices are contiguous row-major blocks.
struct CTensor {
    int n1 = 0, n2 = 0, n3 = 0;
    std::vector<cxd> v;

    CTensor() = default;
    CTensor(int n1_, int n2_, int n3_)
        : n1(n1_), n2(n2_), n3(n3_), v(static_cast<size_t>(n1_) * n2_ * n3_) {}

    cxd& at(int i, int j, int k) {
        return v[(static_cast<size_t>(k) * n1 + i) * n2 + j];
    }
    const cxd& at(int i, int j, int k) const {
        return v[(static_cast<size_t>(k) * n1 + i) * n2 + j];
    }
    CMat slice(int k) const;
    void set_slice(int k, const CMat& s);
};

/// Third-order quaternion tensor A = d + j*c.
struct QTensor {
    int n1 = 0, n2 = 0, n3 = 0;
    CTensor d, c;

    QTensor() = default;
    QTensor(int n1_, int n2_, int n3_) : n1(n1_), n2(n2_), n3(n3_), d(n1_, n2_, n3_), c(n1_, n2_, n3_) {}

    Quaternion q(int i, int j, int k) const { return from_pair({d.at(i, j, k), c.at(i, j, k)}); }
    void set(int i, int j, int k, Quaternion q_) {
        const ComplexPair p = to_pair(q_);
        d.at(i, j, k) = p.c1;
        c.at(i, j, k) = p.c2;
    }
    QMatrix slice(int k) const { return {d.slice(k), c.slice(k)}; }
    void set_slice(int k, const QMatrix& s) {
        d.set_slice(k, s.d);
        c.set_slice(k, s.c);
    }
};

/// n1*n3 x n2*n3 z-block circulant matrix of a generating tensor.
struct BCircZ {
    int n1 = 0, n2 = 0, n3 = 0;
    QMatrix payload;
};

QTensor operator-(const QTensor& a, const QTensor& b);
double fro_norm(const QTensor& t);

/// Stacks frontal slices vertically into an n1*n3 x n2 matrix.
QMatrix unfold(const QTensor& t);
/// Inverse of unfold; rows must divide by n3.
QTensor fold(const QMatrix& m, int n3);

/// Plain block circulant matrix of a complex tensor: block (r,c) holds slice
/// (r - c) mod n3.
CMat bcirc(const CTensor& t);

/// bcirc(d) + j * bcirc(c) * (P (x) I): the c-part of block (r,c) holds slice
/// (r + c) mod n3.
BCircZ bcircz(const QTensor& t);
/// Folds the first block column back into a tensor. In validate mode the full
/// payload must match the reconstruction within tol_struct * ||payload||.
QTensor ibcircz(const BCircZ& m, bool validate = false, double tol_struct = 1e-12);
/// Wraps an existing payload, checking divisibility of its dimensions.
BCircZ bcircz_from_payload(QMatrix payload, int n3);

/// Mode-3 DFT pair: the d-part gets the unnormalized DFT of its fibers, the
/// c-part gets the frequency-reversal permutation applied after the same DFT.
QTensor fftq(const QTensor& t);
QTensor ifftq(const QTensor& t);

/// Frontal slices placed on the block diagonal, and its inverse.
QMatrix diag_hat(const QTensor& t);
QTensor idiag(const QMatrix& m, int n1, int n2, int n3, double tol_struct = 1e-12);

enum class ProductPath { direct, fourier };
/// QT-product; both paths agree to rounding. direct = fold(bcircz(A)*unfold(B)),
/// fourier = ifftq of slice-wise products of the hat tensors.
QTensor qt_product(const QTensor& a, const QTensor& b, ProductPath path = ProductPath::fourier);

enum class CtPath { definition, fourier };
/// Tensor conjugate transpose: the d-part is the complex tensor conjugate
/// transpose (slice-wise ^H with slices 2..n3 reversed), the c-part is the
/// negated slice-wise plain transpose.
QTensor tensor_ct(const QTensor& a, CtPath path = CtPath::definition);

/// First frontal slice I_n, remaining slices zero.
QTensor identity_tensor(int n, int n3);

bool is_unitary_t(const QTensor& t, double tol = 1e-10);
bool is_hermitian_t(const QTensor& t, double tol = 1e-10);
bool is_f_diagonal(const QTensor& t, double tol = 1e-10);
bool is_f_upper_triangular(const QTensor& t, double tol = 1e-10);
bool is_f_lower_triangular(const QTensor& t, double tol = 1e-10);
bool is_unit_f_lower_triangular(const QTensor& t, double tol = 1e-10);
bool is_f_permutation(const QTensor& t, double tol = 1e-10);
bool is_f_psd(const QTensor& t, double tol = 1e-10);

/// Normalized DFT matrix F(i,j) = n^{-1/2} w^{ij}, w = exp(-2 pi i / n).
CMat dft_matrix(int n);
/// Frequency-reversal permutation: fixes index 0, maps t to n - t otherwise.
CMat reversal_perm_matrix(int n);
int reversal_index(int t, int n);
CMat kron(const CMat& a, const CMat& b);
/// Embeds a complex matrix as a quaternion matrix with zero j-part.
QMatrix complex_to_qmatrix(const CMat& m);

/// Entries uniform on (0,1) in all four components.
QTensor random_uniform_tensor(int n1, int n2, int n3, std::mt19937_64& rng);
QMatrix random_uniform_qmatrix(int rows, int cols, std::mt19937_64& rng);

}  // namespace qtz
