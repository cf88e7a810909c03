#include "qtz/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qtz {

QMatrix::QMatrix(CMat d_, CMat c_) : rows(d_.rows), cols(d_.cols), d(std::move(d_)), c(std::move(c_)) {
    if (d.rows != c.rows || d.cols != c.cols)
        throw ShapeMismatch("QMatrix: split parts differ in shape");
}

QMatrix QMatrix::identity(int n) {
    QMatrix I(n, n);
    I.d = CMat::identity(n);
    return I;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ShapeMismatch("QMatrix +: shapes differ");
    QMatrix r = a;
    for (size_t t = 0; t < r.d.a.size(); ++t) {
        r.d.a[t] += b.d.a[t];
        r.c.a[t] += b.c.a[t];
    }
    return r;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ShapeMismatch("QMatrix -: shapes differ");
    QMatrix r = a;
    for (size_t t = 0; t < r.d.a.size(); ++t) {
        r.d.a[t] -= b.d.a[t];
        r.c.a[t] -= b.c.a[t];
    }
    return r;
}

QMatrix operator*(const QMatrix& a, double s) {
    QMatrix r = a;
    for (size_t t = 0; t < r.d.a.size(); ++t) {
        r.d.a[t] *= s;
        r.c.a[t] *= s;
    }
    return r;
}

QMatrix mat_mul(const QMatrix& a, const QMatrix& b) {
    if (a.cols != b.rows) throw ShapeMismatch("mat_mul: inner dimensions differ");
    QMatrix r(a.rows, b.cols);
    kern::zgemm(a.rows, b.cols, a.cols, cxd{1.0, 0.0}, a.d.a.data(), a.cols, false, b.d.a.data(),
                b.cols, r.d.a.data(), r.cols);
    kern::zgemm(a.rows, b.cols, a.cols, cxd{-1.0, 0.0}, a.c.a.data(), a.cols, true, b.c.a.data(),
                b.cols, r.d.a.data(), r.cols);
    kern::zgemm(a.rows, b.cols, a.cols, cxd{1.0, 0.0}, a.d.a.data(), a.cols, true, b.c.a.data(),
                b.cols, r.c.a.data(), r.cols);
    kern::zgemm(a.rows, b.cols, a.cols, cxd{1.0, 0.0}, a.c.a.data(), a.cols, false, b.d.a.data(),
                b.cols, r.c.a.data(), r.cols);
    return r;
}

QMatrix mat_ct(const QMatrix& a) {
    QMatrix r(a.cols, a.rows);
    r.d = ctranspose(a.d);
    r.c = transpose(a.c);
    for (cxd& v : r.c.a) v = -v;
    return r;
}

double fro_norm(const QMatrix& a) {
    double s = 0.0;
    for (const cxd& v : a.d.a) s += std::norm(v);
    for (const cxd& v : a.c.a) s += std::norm(v);
    return std::sqrt(s);
}

double max_qnorm(const QMatrix& a) {
    double m = 0.0;
    for (size_t t = 0; t < a.d.a.size(); ++t)
        m = std::max(m, std::norm(a.d.a[t]) + std::norm(a.c.a[t]));
    return std::sqrt(m);
}

CMat complex_adjoint(const QMatrix& a) {
    const int r = a.rows, c = a.cols;
    CMat m(2 * r, 2 * c);
    for (int i = 0; i < r; ++i) {
        cxd* top = m.row(i);
        cxd* bot = m.row(r + i);
        const cxd* di = a.d.row(i);
        const cxd* ci = a.c.row(i);
        for (int j = 0; j < c; ++j) {
            top[j] = di[j];
            top[c + j] = -std::conj(ci[j]);
            bot[j] = ci[j];
            bot[c + j] = std::conj(di[j]);
        }
    }
    return m;
}

QMatrix adjoint_extract(const CMat& m, bool validate, double tol_struct) {
    if (m.rows % 2 != 0 || m.cols % 2 != 0)
        throw ShapeMismatch("adjoint_extract: dimensions must be even");
    const int r = m.rows / 2, c = m.cols / 2;
    QMatrix q(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            q.d(i, j) = m(i, j);
            q.c(i, j) = m(r + i, j);
        }
    if (validate) {
        double viol = 0.0;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                viol += std::norm(m(r + i, c + j) - std::conj(m(i, j)));
                viol += std::norm(m(i, c + j) + std::conj(m(r + i, j)));
            }
        const double scale = fro_norm(m);
        if (std::sqrt(viol) > tol_struct * (scale > 0.0 ? scale : 1.0))
            throw StructureViolation("adjoint_extract: block symmetry violated");
    }
    return q;
}

QMatrix minv(const QMatrix& a, double tol_pivot) {
    if (a.rows != a.cols) throw ShapeMismatch("minv: matrix not square");
    CMat inv = inverse(complex_adjoint(a), tol_pivot);
    return adjoint_extract(inv, /*validate=*/false);
}

QMatrix qsolve(const QMatrix& a, const QMatrix& b, double tol_pivot) {
    if (a.rows != a.cols) throw ShapeMismatch("qsolve: matrix not square");
    if (a.cols != b.rows) throw ShapeMismatch("qsolve: rhs rows differ");
    CMat adj = complex_adjoint(a);
    std::vector<int> piv;
    lu_factor(adj, piv, tol_pivot);
    CMat rhs(2 * b.rows, b.cols);
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            rhs(i, j) = b.d(i, j);
            rhs(b.rows + i, j) = b.c(i, j);
        }
    lu_solve(adj, piv, rhs);
    QMatrix x(b.rows, b.cols);
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            x.d(i, j) = rhs(i, j);
            x.c(i, j) = rhs(b.rows + i, j);
        }
    return x;
}

namespace {

// Column-major quaternion workspace for the one-sided Jacobi sweep.
struct QCols {
    int m = 0, n = 0;
    std::vector<Quaternion> v;  // column j at v[j*m .. j*m+m)

    QCols(int m_, int n_) : m(m_), n(n_), v(static_cast<size_t>(m_) * n_) {}
    Quaternion* col(int j) { return v.data() + static_cast<size_t>(j) * m; }
    const Quaternion* col(int j) const { return v.data() + static_cast<size_t>(j) * m; }
};

QCols to_cols(const QMatrix& a) {
    QCols w(a.rows, a.cols);
    for (int j = 0; j < a.cols; ++j) {
        Quaternion* cj = w.col(j);
        for (int i = 0; i < a.rows; ++i) cj[i] = a.q(i, j);
    }
    return w;
}

double col_norm2(const Quaternion* c, int m) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += qnorm2(c[i]);
    return s;
}

Quaternion col_dot(const Quaternion* a, const Quaternion* b, int m) {
    Quaternion s{};
    for (int i = 0; i < m; ++i) s += qmul(qconj(a[i]), b[i]);
    return s;
}

// right-multiplies columns (p,q) by [[cs, w*sn],[-conj(w)*sn, cs]]
void rotate_cols(Quaternion* cp, Quaternion* cq, int m, double cs, double sn, Quaternion w) {
    const Quaternion wc = qconj(w);
    for (int i = 0; i < m; ++i) {
        const Quaternion u = cp[i], v = cq[i];
        cp[i] = u * cs - qmul(v, wc) * sn;
        cq[i] = qmul(u, w) * sn + v * cs;
    }
}

// Deterministic completion of an orthonormal set to a full unitary basis:
// each new column is the canonical basis vector with the largest residual
// against the accepted set (smallest index on ties), re-orthogonalized.
void complete_basis(QCols& u, int have) {
    const int m = u.m;
    std::vector<Quaternion> tmp(m);
    const auto residual = [&](int e, int next, Quaternion* out) {
        for (int i = 0; i < m; ++i) out[i] = Quaternion{};
        out[e] = Quaternion{1.0, 0.0, 0.0, 0.0};
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < next; ++j) {
                const Quaternion proj = col_dot(u.col(j), out, m);
                const Quaternion* cj = u.col(j);
                for (int i = 0; i < m; ++i) out[i] -= qmul(cj[i], proj);
            }
        return std::sqrt(col_norm2(out, m));
    };
    for (int next = have; next < m; ++next) {
        int best_e = 0;
        double best_nrm = -1.0;
        for (int e = 0; e < m; ++e) {
            const double nrm = residual(e, next, tmp.data());
            if (nrm > best_nrm + 1e-15) {
                best_nrm = nrm;
                best_e = e;
            }
        }
        if (!(best_nrm > 1e-8)) throw NoConvergence("msvd: failed to complete unitary basis");
        const double nrm = residual(best_e, next, u.col(next));
        const double inv = 1.0 / nrm;
        Quaternion* cand = u.col(next);
        for (int i = 0; i < m; ++i) cand[i] = cand[i] * inv;
    }
}

// Right-multiply column j by a unit quaternion making its first significant
// entry real positive; returns the applied phase.
Quaternion normalize_col_phase(Quaternion* c, int m) {
    int k = 0;
    while (k < m && qnorm(c[k]) <= 1e-12) ++k;
    if (k == m) return Quaternion{1.0, 0.0, 0.0, 0.0};
    const double nrm = qnorm(c[k]);
    const Quaternion lam = qconj(c[k]) * (1.0 / nrm);
    for (int i = 0; i < m; ++i) c[i] = qmul(c[i], lam);
    return lam;
}

QMatrix from_cols(const QCols& w) {
    QMatrix a(w.m, w.n);
    for (int j = 0; j < w.n; ++j) {
        const Quaternion* cj = w.col(j);
        for (int i = 0; i < w.m; ++i) a.set(i, j, cj[i]);
    }
    return a;
}

MSvd msvd_tall(const QMatrix& a, int max_sweeps, double conv) {
    const int m = a.rows, n = a.cols;
    QCols w = to_cols(a);
    QCols v(n, n);
    for (int j = 0; j < n; ++j) v.col(j)[j] = Quaternion{1.0, 0.0, 0.0, 0.0};

    bool converged = (n <= 1);
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double app = col_norm2(w.col(p), m);
                const double aqq = col_norm2(w.col(q), m);
                if (app == 0.0 || aqq == 0.0) continue;
                const Quaternion apq = col_dot(w.col(p), w.col(q), m);
                const double g = qnorm(apq);
                if (g <= conv * std::sqrt(app * aqq)) continue;
                converged = false;
                const Quaternion u = apq * (1.0 / g);
                const double tau = (aqq - app) / (2.0 * g);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;
                rotate_cols(w.col(p), w.col(q), m, cs, sn, u);
                rotate_cols(v.col(p), v.col(q), n, cs, sn, u);
            }
        }
    }
    if (!converged) throw NoConvergence("msvd: Jacobi sweep budget exhausted");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> nrm(n);
    for (int j = 0; j < n; ++j) nrm[j] = std::sqrt(col_norm2(w.col(j), m));
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return nrm[x] > nrm[y]; });

    MSvd out;
    out.S.resize(n);
    QCols uc(m, m), vc(n, n);
    const double smax = n > 0 ? nrm[order[0]] : 0.0;
    const double cutoff = smax > 0.0 ? 1e-14 * smax : 0.0;
    int rank = 0;
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        out.S[j] = nrm[src];
        std::copy(v.col(src), v.col(src) + n, vc.col(j));
        if (nrm[src] > cutoff && smax > 0.0) {
            const double inv = 1.0 / nrm[src];
            Quaternion* cj = uc.col(j);
            const Quaternion* sj = w.col(src);
            for (int i = 0; i < m; ++i) cj[i] = sj[i] * inv;
            rank = j + 1;
        }
    }
    complete_basis(uc, rank);

    // joint phase fix on paired columns, independent on the rest
    for (int j = 0; j < n; ++j) {
        if (j < rank) {
            const Quaternion lam = normalize_col_phase(uc.col(j), m);
            Quaternion* vcj = vc.col(j);
            for (int i = 0; i < n; ++i) vcj[i] = qmul(vcj[i], lam);
        } else {
            normalize_col_phase(vc.col(j), n);
        }
    }
    for (int j = rank; j < m; ++j) normalize_col_phase(uc.col(j), m);

    out.U = from_cols(uc);
    out.V = from_cols(vc);
    return out;
}

}  // namespace

MSvd msvd(const QMatrix& a, int max_sweeps, double tol) {
    if (a.rows >= a.cols) return msvd_tall(a, max_sweeps, tol);
    MSvd t = msvd_tall(mat_ct(a), max_sweeps, tol);
    MSvd out;
    out.U = std::move(t.V);
    out.V = std::move(t.U);
    out.S = std::move(t.S);
    // restore the left-factor phase convention after the swap
    const double cutoff = out.S.empty() || out.S[0] == 0.0 ? 0.0 : 1e-14 * out.S[0];
    for (size_t j = 0; j < out.S.size(); ++j) {
        if (!(out.S[j] > cutoff)) break;
        int k = 0;
        while (k < out.U.rows && qnorm(out.U.q(k, static_cast<int>(j))) <= 1e-12) ++k;
        if (k == out.U.rows) continue;
        const Quaternion u0 = out.U.q(k, static_cast<int>(j));
        const Quaternion lam = qconj(u0) * (1.0 / qnorm(u0));
        for (int i = 0; i < out.U.rows; ++i)
            out.U.set(i, static_cast<int>(j), qmul(out.U.q(i, static_cast<int>(j)), lam));
        for (int i = 0; i < out.V.rows; ++i)
            out.V.set(i, static_cast<int>(j), qmul(out.V.q(i, static_cast<int>(j)), lam));
    }
    return out;
}

MPolar mpolar_right(const QMatrix& a) {
    if (a.rows != a.cols) throw ShapeMismatch("mpolar_right: matrix not square");
    const MSvd sv = msvd(a);
    const int n = a.rows;
    MPolar p;
    p.U = mat_mul(sv.U, mat_ct(sv.V));
    QMatrix vs = sv.V;  // V * diag(S)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            vs.d(i, j) *= sv.S[j];
            vs.c(i, j) *= sv.S[j];
        }
    p.H = mat_mul(vs, mat_ct(sv.V));
    return p;
}

MPolar mpolar_left(const QMatrix& a) {
    if (a.rows != a.cols) throw ShapeMismatch("mpolar_left: matrix not square");
    const MSvd sv = msvd(a);
    const int n = a.rows;
    MPolar p;
    p.U = mat_mul(sv.U, mat_ct(sv.V));
    QMatrix us = sv.U;  // U * diag(S)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            us.d(i, j) *= sv.S[j];
            us.c(i, j) *= sv.S[j];
        }
    p.H = mat_mul(us, mat_ct(sv.U));
    return p;
}

namespace {

std::vector<Quaternion> to_rowmajor(const QMatrix& a) {
    std::vector<Quaternion> w(static_cast<size_t>(a.rows) * a.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) w[static_cast<size_t>(i) * a.cols + j] = a.q(i, j);
    return w;
}

}  // namespace

MPlu mplu(const QMatrix& a, double tol_pivot) {
    if (a.rows != a.cols) throw ShapeMismatch("mplu: matrix not square");
    const int n = a.rows;
    std::vector<Quaternion> w = to_rowmajor(a);
    const auto at = [&](int i, int j) -> Quaternion& { return w[static_cast<size_t>(i) * n + j]; };

    std::vector<double> colscale(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) colscale[j] = std::max(colscale[j], qnorm(at(i, j)));

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = qnorm(at(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = qnorm(at(i, k));
            if (v > best) {  // strict: ties keep the smallest row index
                best = v;
                p = i;
            }
        }
        if (!(best > tol_pivot * colscale[k]))
            throw Singular("mplu: no admissible pivot in column " + std::to_string(k));
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
            std::swap(perm[k], perm[p]);
        }
        const Quaternion pinv = qinv(at(k, k));
        for (int i = k + 1; i < n; ++i) {
            const Quaternion l = qmul(at(i, k), pinv);
            at(i, k) = l;
            for (int j = k + 1; j < n; ++j) at(i, j) -= qmul(l, at(k, j));
        }
    }

    MPlu out;
    out.perm = std::move(perm);
    out.L = QMatrix::identity(n);
    out.U = QMatrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j < i)
                out.L.set(i, j, at(i, j));
            else
                out.U.set(i, j, at(i, j));
        }
    return out;
}

void mlu(const QMatrix& a, QMatrix& l, QMatrix& u, double tol_pivot) {
    if (a.rows != a.cols) throw ShapeMismatch("mlu: matrix not square");
    const int n = a.rows;
    std::vector<Quaternion> w = to_rowmajor(a);
    const auto at = [&](int i, int j) -> Quaternion& { return w[static_cast<size_t>(i) * n + j]; };
    const double scale = max_qnorm(a);

    for (int k = 0; k < n; ++k) {
        if (!(qnorm(at(k, k)) > tol_pivot * (scale > 0.0 ? scale : 1.0)))
            throw ZeroPivot("mlu: vanishing pivot at step " + std::to_string(k), -1, k);
        const Quaternion pinv = qinv(at(k, k));
        for (int i = k + 1; i < n; ++i) {
            const Quaternion lik = qmul(at(i, k), pinv);
            at(i, k) = lik;
            for (int j = k + 1; j < n; ++j) at(i, j) -= qmul(lik, at(k, j));
        }
    }

    l = QMatrix::identity(n);
    u = QMatrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j < i)
                l.set(i, j, at(i, j));
            else
                u.set(i, j, at(i, j));
        }
}

QMatrix perm_matrix(const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    QMatrix p(n, n);
    for (int i = 0; i < n; ++i) p.d(i, perm[i]) = 1.0;
    return p;
}

bool is_hermitian(const QMatrix& a, double tol) {
    if (a.rows != a.cols) return false;
    const double nrm = fro_norm(a);
    return fro_norm(mat_ct(a) - a) <= tol * (nrm > 0.0 ? nrm : 1.0);
}

bool is_unitary(const QMatrix& a, double tol) {
    if (a.rows != a.cols) return false;
    return fro_norm(mat_mul(mat_ct(a), a) - QMatrix::identity(a.rows)) <= tol;
}

bool is_psd(const QMatrix& a, double tol) {
    if (!is_hermitian(a, tol)) return false;
    CMat adj = complex_adjoint(a);
    // symmetrize to guard the eigensolver against rounding in the input
    CMat h(adj.rows, adj.cols);
    for (int i = 0; i < adj.rows; ++i)
        for (int j = 0; j < adj.cols; ++j) h(i, j) = 0.5 * (adj(i, j) + std::conj(adj(j, i)));
    const std::vector<double> ev = hermitian_eigenvalues(std::move(h));
    if (ev.empty()) return true;
    return ev.front() >= -tol * fro_norm(a);
}

}  // namespace qtz
