#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "qtz/qmatrix.hpp"

using namespace qtz;
using oracles::rel;

namespace {

QMatrix random_q(int r, int c, std::mt19937_64& rng) {
    QMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.set(i, j, oracles::random_quaternion(rng));
    return m;
}

double residual_vs(const QMatrix& a, const QMatrix& b) { return fro_norm(a - b); }

}  // namespace

TEST_SUITE_BEGIN("qmat");

TEST_CASE("mat_mul against the entrywise quaternion triple loop") {
    std::mt19937_64 rng(21);
    const QMatrix a = random_q(3, 3, rng);
    CHECK(residual_vs(mat_mul(a, QMatrix::identity(3)), a) == 0.0);
    for (int rep = 0; rep < 10; ++rep) {
        const int m = 1 + static_cast<int>(rng() % 8), k = 1 + static_cast<int>(rng() % 8),
                  n = 1 + static_cast<int>(rng() % 8);
        const QMatrix x = random_q(m, k, rng), y = random_q(k, n, rng);
        const QMatrix fast = mat_mul(x, y), naive = oracles::naive_mat_mul(x, y);
        CHECK(rel(residual_vs(fast, naive), fro_norm(naive)) < 1e-12);
    }
    CHECK_THROWS_AS(mat_mul(random_q(2, 3, rng), random_q(2, 3, rng)), ShapeMismatch);
}

TEST_CASE("complex adjoint is a homomorphism") {
    std::mt19937_64 rng(22);
    const QMatrix a = random_q(3, 4, rng), b = random_q(4, 2, rng);
    const CMat lhs = complex_adjoint(mat_mul(a, b));
    const CMat rhs = matmul(complex_adjoint(a), complex_adjoint(b));
    CHECK(rel(fro_norm([&] {
              CMat d = lhs;
              for (size_t t = 0; t < d.a.size(); ++t) d.a[t] -= rhs.a[t];
              return d;
          }()),
              fro_norm(rhs)) < 1e-12);
    // adjoint of conjugate transpose
    const CMat l2 = complex_adjoint(mat_ct(a));
    const CMat r2 = ctranspose(complex_adjoint(a));
    for (size_t t = 0; t < l2.a.size(); ++t) CHECK(l2.a[t] == r2.a[t]);
}

TEST_CASE("mat_ct") {
    std::mt19937_64 rng(23);
    const QMatrix a = random_q(3, 4, rng);
    CHECK(residual_vs(mat_ct(mat_ct(a)), a) == 0.0);

    QMatrix j1(1, 1);
    j1.set(0, 0, {0, 0, 1, 0});
    CHECK(mat_ct(j1).q(0, 0) == Quaternion{0, 0, -1, 0});

    const QMatrix x = random_q(2, 3, rng), y = random_q(3, 2, rng);
    CHECK(rel(residual_vs(mat_ct(mat_mul(x, y)), mat_mul(mat_ct(y), mat_ct(x))),
              fro_norm(x) * fro_norm(y)) < 1e-13);
}

TEST_CASE("complex adjoint round trip and structure check") {
    CHECK(fro_norm(complex_adjoint(QMatrix::identity(3))) == doctest::Approx(std::sqrt(6.0)));
    std::mt19937_64 rng(24);
    const QMatrix a = random_q(3, 2, rng);
    const QMatrix back = adjoint_extract(complex_adjoint(a));
    CHECK(residual_vs(back, a) == 0.0);

    QMatrix j1(1, 1);
    j1.set(0, 0, {0, 0, 1, 0});
    const CMat adj = complex_adjoint(j1);
    CHECK(adj(0, 0) == cxd{0, 0});
    CHECK(adj(0, 1) == cxd{-1, 0});
    CHECK(adj(1, 0) == cxd{1, 0});
    CHECK(adj(1, 1) == cxd{0, 0});

    CMat bad = complex_adjoint(a);
    bad(0, 3) += cxd{1e-3, 0.0};
    CHECK_THROWS_AS(adjoint_extract(bad), StructureViolation);
}

TEST_CASE("minv") {
    CHECK(residual_vs(minv(QMatrix::identity(4)), QMatrix::identity(4)) < 1e-15);

    QMatrix d(2, 2);
    d.set(0, 0, {2, 0, 0, 0});
    d.set(1, 1, {0, 0, 1, 0});
    const QMatrix di = minv(d);
    CHECK(qnorm(di.q(0, 0) - Quaternion{0.5, 0, 0, 0}) < 1e-15);
    CHECK(qnorm(di.q(1, 1) - Quaternion{0, 0, -1, 0}) < 1e-15);

    std::mt19937_64 rng(25);
    const QMatrix a = random_q(5, 5, rng);
    CHECK(rel(fro_norm(mat_mul(minv(a), a) - QMatrix::identity(5)), 1.0) < 1e-12);

    QMatrix s(2, 2);
    s.set(0, 0, {1, 2, 3, 4});
    s.set(0, 1, {1, 2, 3, 4});
    s.set(1, 0, {1, 2, 3, 4});
    s.set(1, 1, {1, 2, 3, 4});
    CHECK_THROWS_AS(minv(s), Singular);
}

TEST_CASE("msvd basic and contracts") {
    QMatrix d(2, 2);
    d.set(0, 0, {3, 0, 0, 0});
    d.set(1, 1, {1, 0, 0, 0});
    const MSvd sv = msvd(d);
    CHECK(sv.S[0] == doctest::Approx(3.0));
    CHECK(sv.S[1] == doctest::Approx(1.0));
    CHECK(residual_vs(sv.U, QMatrix::identity(2)) < 1e-12);
    CHECK(residual_vs(sv.V, QMatrix::identity(2)) < 1e-12);

    std::mt19937_64 rng(26);
    for (auto [m, n] : {std::pair{4, 3}, {3, 4}, {5, 5}}) {
        const QMatrix a = random_q(m, n, rng);
        const MSvd f = msvd(a);
        // rebuild via the rectangular S: U * S_rect * V^H
        QMatrix s_rect(m, n);
        for (size_t t = 0; t < f.S.size(); ++t)
            s_rect.set(static_cast<int>(t), static_cast<int>(t), {f.S[t], 0, 0, 0});
        const QMatrix rec = mat_mul(mat_mul(f.U, s_rect), mat_ct(f.V));
        CHECK(rel(residual_vs(rec, a), fro_norm(a)) < 1e-12);
        CHECK(is_unitary(f.U, 1e-11));
        CHECK(is_unitary(f.V, 1e-11));
        for (size_t t = 1; t < f.S.size(); ++t) CHECK(f.S[t] <= f.S[t - 1]);
        // phase convention: first significant entry of each paired U column
        // is real positive
        for (size_t j = 0; j < f.S.size(); ++j) {
            if (f.S[j] <= 1e-12) continue;
            int k = 0;
            while (qnorm(f.U.q(k, static_cast<int>(j))) <= 1e-12) ++k;
            const Quaternion lead = f.U.q(k, static_cast<int>(j));
            CHECK(lead.w > 0.0);
            CHECK(std::abs(lead.x) < 1e-13);
            CHECK(std::abs(lead.y) < 1e-13);
            CHECK(std::abs(lead.z) < 1e-13);
        }
    }
}

TEST_CASE("msvd singular values equal doubled adjoint spectrum") {
    std::mt19937_64 rng(27);
    const QMatrix a = random_q(4, 3, rng);
    const MSvd f = msvd(a);
    const auto adj_sv = oracles::complex_singular_values(complex_adjoint(a));
    REQUIRE(adj_sv.size() == 6);
    for (int t = 0; t < 3; ++t) {
        CHECK(adj_sv[2 * t] == doctest::Approx(f.S[t]).epsilon(1e-10));
        CHECK(adj_sv[2 * t + 1] == doctest::Approx(f.S[t]).epsilon(1e-10));
    }
}

TEST_CASE("msvd singular values invariant under unitary factors") {
    std::mt19937_64 rng(28);
    const QMatrix a = random_q(4, 4, rng);
    const QMatrix u = mpolar_right(random_q(4, 4, rng)).U;
    const QMatrix v = mpolar_right(random_q(4, 4, rng)).U;
    const MSvd base = msvd(a), rot = msvd(mat_mul(u, mat_mul(a, v)));
    for (size_t t = 0; t < base.S.size(); ++t)
        CHECK(rot.S[t] == doctest::Approx(base.S[t]).epsilon(1e-10));
}

TEST_CASE("polar decompositions") {
    const MPolar pi = mpolar_right(QMatrix::identity(3));
    CHECK(residual_vs(pi.U, QMatrix::identity(3)) < 1e-13);
    CHECK(residual_vs(pi.H, QMatrix::identity(3)) < 1e-13);

    const MPolar p2 = mpolar_right(QMatrix::identity(3) * 2.0);
    CHECK(residual_vs(p2.U, QMatrix::identity(3)) < 1e-13);
    CHECK(residual_vs(p2.H, QMatrix::identity(3) * 2.0) < 1e-12);

    std::mt19937_64 rng(29);
    const QMatrix a = random_q(3, 3, rng);
    const MPolar p = mpolar_right(a);
    CHECK(rel(residual_vs(mat_mul(p.U, p.H), a), fro_norm(a)) < 1e-12);
    CHECK(is_unitary(p.U, 1e-10));
    CHECK(is_hermitian(p.H, 1e-12));
    CHECK(is_psd(p.H, 1e-10));

    const MPolar pl = mpolar_left(a);
    CHECK(rel(residual_vs(mat_mul(pl.H, pl.U), a), fro_norm(a)) < 1e-12);
    CHECK(is_psd(pl.H, 1e-10));
}

TEST_CASE("mplu") {
    const MPlu pi = mplu(QMatrix::identity(3));
    CHECK(pi.perm == std::vector<int>{0, 1, 2});
    CHECK(residual_vs(pi.L, QMatrix::identity(3)) == 0.0);
    CHECK(residual_vs(pi.U, QMatrix::identity(3)) == 0.0);

    QMatrix swap(2, 2);
    swap.set(0, 1, {1, 0, 0, 0});
    swap.set(1, 0, {1, 0, 0, 0});
    const MPlu ps = mplu(swap);
    CHECK(ps.perm == std::vector<int>{1, 0});
    CHECK(residual_vs(ps.L, QMatrix::identity(2)) == 0.0);

    std::mt19937_64 rng(31);
    const QMatrix a = random_q(4, 4, rng);
    const MPlu f = mplu(a);
    const QMatrix pa = mat_mul(perm_matrix(f.perm), a);
    CHECK(rel(residual_vs(pa, mat_mul(f.L, f.U)), fro_norm(a)) < 1e-13);

    // determinism on identical input bits
    const MPlu g = mplu(a);
    CHECK(f.perm == g.perm);
    CHECK(residual_vs(f.L, g.L) == 0.0);
    CHECK(residual_vs(f.U, g.U) == 0.0);

    QMatrix z(2, 2);  // first column exactly zero
    z.set(0, 1, {1, 0, 0, 0});
    z.set(1, 1, {2, 0, 0, 0});
    CHECK_THROWS_AS(mplu(z), Singular);
}

TEST_CASE("mlu") {
    QMatrix l, u;
    mlu(QMatrix::identity(3), l, u);
    CHECK(residual_vs(l, QMatrix::identity(3)) == 0.0);
    CHECK(residual_vs(u, QMatrix::identity(3)) == 0.0);

    std::mt19937_64 rng(32);
    QMatrix upper = random_q(3, 3, rng);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j) upper.set(i, j, {});
    mlu(upper, l, u);
    CHECK(residual_vs(l, QMatrix::identity(3)) == 0.0);
    CHECK(residual_vs(u, upper) == 0.0);

    QMatrix dd = random_q(4, 4, rng);
    for (int i = 0; i < 4; ++i) dd.set(i, i, dd.q(i, i) + Quaternion{10, 0, 0, 0});
    mlu(dd, l, u);
    CHECK(rel(residual_vs(mat_mul(l, u), dd), fro_norm(dd)) < 1e-13);

    QMatrix bad(2, 2);  // vanishing leading pivot
    bad.set(0, 1, {1, 0, 0, 0});
    bad.set(1, 0, {1, 0, 0, 0});
    CHECK_THROWS_AS(mlu(bad, l, u), ZeroPivot);
    try {
        mlu(bad, l, u);
    } catch (const ZeroPivot& e) {
        CHECK(e.step == 0);
    }
}

TEST_CASE("predicates") {
    CHECK(is_hermitian(QMatrix::identity(3)));
    QMatrix d(2, 2);
    d.set(0, 0, {1, 0, 0, 0});
    CHECK(is_psd(d, 1e-10));  // diag(1, 0)
    d.set(1, 1, {-1, 0, 0, 0});
    CHECK_FALSE(is_psd(d, 1e-10));  // diag(1, -1)

    std::mt19937_64 rng(33);
    const QMatrix u = mpolar_right(random_q(4, 4, rng)).U;
    CHECK(is_unitary(u, 1e-10));
}

TEST_SUITE_END();
