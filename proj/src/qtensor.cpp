#include "qtz/qtensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qtz {

CMat CTensor::slice(int k) const {
    CMat s(n1, n2);
    const cxd* src = v.data() + static_cast<size_t>(k) * n1 * n2;
    std::copy(src, src + static_cast<size_t>(n1) * n2, s.a.data());
    return s;
}

void CTensor::set_slice(int k, const CMat& s) {
    if (s.rows != n1 || s.cols != n2) throw ShapeMismatch("CTensor::set_slice: shape differs");
    std::copy(s.a.begin(), s.a.end(), v.begin() + static_cast<size_t>(k) * n1 * n2);
}

QTensor operator-(const QTensor& a, const QTensor& b) {
    if (a.n1 != b.n1 || a.n2 != b.n2 || a.n3 != b.n3)
        throw ShapeMismatch("QTensor -: shapes differ");
    QTensor r = a;
    for (size_t t = 0; t < r.d.v.size(); ++t) {
        r.d.v[t] -= b.d.v[t];
        r.c.v[t] -= b.c.v[t];
    }
    return r;
}

double fro_norm(const QTensor& t) {
    double s = 0.0;
    for (const cxd& v : t.d.v) s += std::norm(v);
    for (const cxd& v : t.c.v) s += std::norm(v);
    return std::sqrt(s);
}

QMatrix unfold(const QTensor& t) {
    QMatrix m(t.n1 * t.n3, t.n2);
    // slice-major storage stacks frontal slices already
    std::copy(t.d.v.begin(), t.d.v.end(), m.d.a.begin());
    std::copy(t.c.v.begin(), t.c.v.end(), m.c.a.begin());
    return m;
}

QTensor fold(const QMatrix& m, int n3) {
    if (n3 <= 0 || m.rows % n3 != 0) throw ShapeMismatch("fold: rows not divisible by n3");
    QTensor t(m.rows / n3, m.cols, n3);
    std::copy(m.d.a.begin(), m.d.a.end(), t.d.v.begin());
    std::copy(m.c.a.begin(), m.c.a.end(), t.c.v.begin());
    return t;
}

CMat bcirc(const CTensor& t) {
    const int n1 = t.n1, n2 = t.n2, n3 = t.n3;
    CMat m(n1 * n3, n2 * n3);
    for (int rb = 0; rb < n3; ++rb)
        for (int cb = 0; cb < n3; ++cb) {
            const int k = (rb - cb + n3) % n3;
            for (int i = 0; i < n1; ++i) {
                cxd* dst = m.row(rb * n1 + i) + static_cast<size_t>(cb) * n2;
                for (int j = 0; j < n2; ++j) dst[j] = t.at(i, j, k);
            }
        }
    return m;
}

BCircZ bcircz(const QTensor& t) {
    const int n1 = t.n1, n2 = t.n2, n3 = t.n3;
    BCircZ b{n1, n2, n3, QMatrix(n1 * n3, n2 * n3)};
    for (int rb = 0; rb < n3; ++rb)
        for (int cb = 0; cb < n3; ++cb) {
            const int kd = (rb - cb + n3) % n3;
            const int kc = (rb + cb) % n3;
            for (int i = 0; i < n1; ++i) {
                cxd* dd = b.payload.d.row(rb * n1 + i) + static_cast<size_t>(cb) * n2;
                cxd* cc = b.payload.c.row(rb * n1 + i) + static_cast<size_t>(cb) * n2;
                for (int j = 0; j < n2; ++j) {
                    dd[j] = t.d.at(i, j, kd);
                    cc[j] = t.c.at(i, j, kc);
                }
            }
        }
    return b;
}

BCircZ bcircz_from_payload(QMatrix payload, int n3) {
    if (n3 <= 0 || payload.rows % n3 != 0 || payload.cols % n3 != 0)
        throw ShapeMismatch("bcircz_from_payload: dimensions not divisible by n3");
    return BCircZ{payload.rows / n3, payload.cols / n3, n3, std::move(payload)};
}

QTensor ibcircz(const BCircZ& m, bool validate, double tol_struct) {
    const int n1 = m.n1, n2 = m.n2, n3 = m.n3;
    if (m.payload.rows != n1 * n3 || m.payload.cols != n2 * n3)
        throw ShapeMismatch("ibcircz: payload shape mismatch");
    QTensor t(n1, n2, n3);
    for (int k = 0; k < n3; ++k)
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) {
                t.d.at(i, j, k) = m.payload.d(k * n1 + i, j);
                t.c.at(i, j, k) = m.payload.c(k * n1 + i, j);
            }
    if (validate) {
        const BCircZ re = bcircz(t);
        const double nrm = fro_norm(m.payload);
        if (fro_norm(re.payload - m.payload) > tol_struct * (nrm > 0.0 ? nrm : 1.0))
            throw StructureViolation("ibcircz: payload is not z-block circulant");
    }
    return t;
}

int reversal_index(int t, int n) { return t == 0 ? 0 : n - t; }

namespace {

std::vector<cxd> twiddle(int n) {
    std::vector<cxd> w(n);
    for (int t = 0; t < n; ++t) {
        const double ang = -2.0 * std::numbers::pi * t / n;
        w[t] = cxd{std::cos(ang), std::sin(ang)};
    }
    return w;
}

enum class Dir { forward, inverse };

// Unnormalized forward / (1/n)-normalized inverse DFT along mode 3.
void dft_mode3(const CTensor& src, CTensor& dst, const std::vector<cxd>& w, Dir dir) {
    const int n1 = src.n1, n2 = src.n2, n3 = src.n3;
    const size_t stride = static_cast<size_t>(n1) * n2;
    const double scale = dir == Dir::inverse ? 1.0 / n3 : 1.0;
    std::vector<cxd> fiber(n3);
    for (size_t base = 0; base < stride; ++base) {
        const cxd* in = src.v.data() + base;
        for (int s = 0; s < n3; ++s) fiber[s] = in[s * stride];
        cxd* out = dst.v.data() + base;
        for (int t = 0; t < n3; ++t) {
            cxd acc{0.0, 0.0};
            for (int s = 0; s < n3; ++s) {
                const int idx = static_cast<int>((static_cast<long long>(t) * s) % n3);
                const cxd tw = dir == Dir::forward ? w[idx] : std::conj(w[idx]);
                acc += tw * fiber[s];
            }
            out[t * stride] = acc * scale;
        }
    }
}

void apply_reversal_mode3(CTensor& t) {
    const int n3 = t.n3;
    const size_t stride = static_cast<size_t>(t.n1) * t.n2;
    for (int a = 1, b = n3 - 1; a < b; ++a, --b) {
        cxd* pa = t.v.data() + static_cast<size_t>(a) * stride;
        cxd* pb = t.v.data() + static_cast<size_t>(b) * stride;
        for (size_t s = 0; s < stride; ++s) std::swap(pa[s], pb[s]);
    }
}

}  // namespace

QTensor fftq(const QTensor& t) {
    QTensor out(t.n1, t.n2, t.n3);
    const std::vector<cxd> w = twiddle(t.n3);
    dft_mode3(t.d, out.d, w, Dir::forward);
    dft_mode3(t.c, out.c, w, Dir::forward);
    apply_reversal_mode3(out.c);
    return out;
}

QTensor ifftq(const QTensor& t) {
    QTensor out(t.n1, t.n2, t.n3);
    const std::vector<cxd> w = twiddle(t.n3);
    dft_mode3(t.d, out.d, w, Dir::inverse);
    CTensor ctmp = t.c;
    apply_reversal_mode3(ctmp);
    dft_mode3(ctmp, out.c, w, Dir::inverse);
    return out;
}

QMatrix diag_hat(const QTensor& t) {
    QMatrix m(t.n1 * t.n3, t.n2 * t.n3);
    for (int k = 0; k < t.n3; ++k)
        for (int i = 0; i < t.n1; ++i)
            for (int j = 0; j < t.n2; ++j) {
                m.d(k * t.n1 + i, k * t.n2 + j) = t.d.at(i, j, k);
                m.c(k * t.n1 + i, k * t.n2 + j) = t.c.at(i, j, k);
            }
    return m;
}

QTensor idiag(const QMatrix& m, int n1, int n2, int n3, double tol_struct) {
    if (m.rows != n1 * n3 || m.cols != n2 * n3) throw ShapeMismatch("idiag: shape mismatch");
    QTensor t(n1, n2, n3);
    double off = 0.0;
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) {
            const int rb = r / n1, cb = c / n2;
            if (rb == cb) {
                t.d.at(r % n1, c % n2, rb) = m.d(r, c);
                t.c.at(r % n1, c % n2, rb) = m.c(r, c);
            } else {
                off += std::norm(m.d(r, c)) + std::norm(m.c(r, c));
            }
        }
    const double nrm = fro_norm(m);
    if (std::sqrt(off) > tol_struct * (nrm > 0.0 ? nrm : 1.0))
        throw StructureViolation("idiag: off-diagonal blocks are not zero");
    return t;
}

QTensor qt_product(const QTensor& a, const QTensor& b, ProductPath path) {
    if (a.n2 != b.n1 || a.n3 != b.n3) throw ShapeMismatch("qt_product: shapes not conformable");
    if (path == ProductPath::direct) {
        return fold(mat_mul(bcircz(a).payload, unfold(b)), a.n3);
    }
    const QTensor ah = fftq(a), bh = fftq(b);
    QTensor ch(a.n1, b.n2, a.n3);
    for (int k = 0; k < a.n3; ++k) ch.set_slice(k, mat_mul(ah.slice(k), bh.slice(k)));
    return ifftq(ch);
}

QTensor tensor_ct(const QTensor& a, CtPath path) {
    if (path == CtPath::fourier) {
        const QTensor ah = fftq(a);
        QTensor rh(a.n2, a.n1, a.n3);
        for (int k = 0; k < a.n3; ++k) rh.set_slice(k, mat_ct(ah.slice(k)));
        return ifftq(rh);
    }
    QTensor r(a.n2, a.n1, a.n3);
    for (int k = 0; k < a.n3; ++k) {
        const int ks = reversal_index(k, a.n3);
        for (int i = 0; i < a.n1; ++i)
            for (int j = 0; j < a.n2; ++j) {
                r.d.at(j, i, k) = std::conj(a.d.at(i, j, ks));
                r.c.at(j, i, k) = -a.c.at(i, j, k);
            }
    }
    return r;
}

QTensor identity_tensor(int n, int n3) {
    QTensor t(n, n, n3);
    for (int i = 0; i < n; ++i) t.d.at(i, i, 0) = 1.0;
    return t;
}

bool is_unitary_t(const QTensor& t, double tol) {
    if (t.n1 != t.n2) return false;
    const QTensor ct = tensor_ct(t);
    const QTensor i = identity_tensor(t.n1, t.n3);
    return fro_norm(qt_product(ct, t) - i) <= tol && fro_norm(qt_product(t, ct) - i) <= tol;
}

bool is_hermitian_t(const QTensor& t, double tol) {
    if (t.n1 != t.n2) return false;
    const double nrm = fro_norm(t);
    return fro_norm(tensor_ct(t) - t) <= tol * (nrm > 0.0 ? nrm : 1.0);
}

namespace {

// Frobenius mass of the entries failing a per-slice index predicate.
template <typename Keep>
double pattern_violation(const QTensor& t, Keep keep) {
    double s = 0.0;
    for (int k = 0; k < t.n3; ++k)
        for (int i = 0; i < t.n1; ++i)
            for (int j = 0; j < t.n2; ++j)
                if (!keep(i, j)) s += std::norm(t.d.at(i, j, k)) + std::norm(t.c.at(i, j, k));
    return std::sqrt(s);
}

double rel_scale(const QTensor& t) {
    const double n = fro_norm(t);
    return n > 0.0 ? n : 1.0;
}

}  // namespace

bool is_f_diagonal(const QTensor& t, double tol) {
    return pattern_violation(t, [](int i, int j) { return i == j; }) <= tol * rel_scale(t);
}

bool is_f_upper_triangular(const QTensor& t, double tol) {
    return pattern_violation(t, [](int i, int j) { return j >= i; }) <= tol * rel_scale(t);
}

bool is_f_lower_triangular(const QTensor& t, double tol) {
    return pattern_violation(t, [](int i, int j) { return j <= i; }) <= tol * rel_scale(t);
}

bool is_unit_f_lower_triangular(const QTensor& t, double tol) {
    if (t.n1 != t.n2) return false;
    if (!is_f_lower_triangular(t, tol)) return false;
    const double s = rel_scale(t);
    for (int i = 0; i < t.n1; ++i) {
        const Quaternion one{1.0, 0.0, 0.0, 0.0};
        if (qnorm(t.q(i, i, 0) - one) > tol * s) return false;
    }
    return true;
}

bool is_f_permutation(const QTensor& t, double tol) {
    if (t.n1 != t.n2) return false;
    for (int k = 0; k < t.n3; ++k) {
        std::vector<int> rowones(t.n1, 0), colones(t.n2, 0);
        for (int i = 0; i < t.n1; ++i)
            for (int j = 0; j < t.n2; ++j) {
                const Quaternion q = t.q(i, j, k);
                if (qnorm(q) <= tol) continue;
                if (qnorm(q - Quaternion{1.0, 0.0, 0.0, 0.0}) <= tol) {
                    ++rowones[i];
                    ++colones[j];
                } else {
                    return false;
                }
            }
        for (int i = 0; i < t.n1; ++i)
            if (rowones[i] != 1 || colones[i] != 1) return false;
    }
    return true;
}

bool is_f_psd(const QTensor& t, double tol) {
    if (!is_hermitian_t(t, tol)) return false;
    for (int k = 0; k < t.n3; ++k)
        if (!is_psd(t.slice(k), tol)) return false;
    return true;
}

CMat dft_matrix(int n) {
    CMat f(n, n);
    const std::vector<cxd> w = twiddle(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            f(i, j) = w[static_cast<int>((static_cast<long long>(i) * j) % n)] * s;
    return f;
}

CMat reversal_perm_matrix(int n) {
    CMat p(n, n);
    for (int i = 0; i < n; ++i) p(i, reversal_index(i, n)) = 1.0;
    return p;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat k(a.rows * b.rows, a.cols * b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            const cxd s = a(i, j);
            if (s == cxd{0.0, 0.0}) continue;
            for (int p = 0; p < b.rows; ++p)
                for (int q = 0; q < b.cols; ++q) k(i * b.rows + p, j * b.cols + q) = s * b(p, q);
        }
    return k;
}

QMatrix complex_to_qmatrix(const CMat& m) {
    QMatrix q(m.rows, m.cols);
    q.d = m;
    return q;
}

QTensor random_uniform_tensor(int n1, int n2, int n3, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    QTensor t(n1, n2, n3);
    for (int k = 0; k < n3; ++k)
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) {
                const double w = u(rng), x = u(rng), y = u(rng), z = u(rng);
                t.set(i, j, k, {w, x, y, z});
            }
    return t;
}

QMatrix random_uniform_qmatrix(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    QMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double w = u(rng), x = u(rng), y = u(rng), z = u(rng);
            m.set(i, j, {w, x, y, z});
        }
    return m;
}

}  // namespace qtz
