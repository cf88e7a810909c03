// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qtz/checks.hpp"
#include "qtz/decomp.hpp"
#include "qtz/io.hpp"
#include "qtz/media.hpp"
#include "qtz/solve.hpp"

#ifndef QTZ_DATA_DIR
#define QTZ_DATA_DIR "data"
#endif

using namespace qtz;

namespace {

int g_failures = 0;

void report(int idx, const char* title, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s  [%s]\n", pass ? "PASS" : "FAIL", idx, title,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3e", v);
    return b;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double rel(double num, double den) { return num / (den > 0.0 ? den : 1.0); }

const std::string kGolden = std::string(QTZ_DATA_DIR) + "/golden";
const std::string kClip = std::string(QTZ_DATA_DIR) + "/clip32";

void criterion1() {
    const double t0 = now_s();
    std::mt19937_64 rng(20250101);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int n1 = 1 + static_cast<int>(rng() % 4), n2 = 1 + static_cast<int>(rng() % 3),
                  n3 = 1 + static_cast<int>(rng() % 6);
        const QTensor a = random_uniform_tensor(n1, n2, n3, rng);
        const CMat f = dft_matrix(n3);
        const QMatrix lhs =
            mat_mul(complex_to_qmatrix(kron(f, CMat::identity(n1))),
                    mat_mul(bcircz(a).payload,
                            complex_to_qmatrix(kron(ctranspose(f), CMat::identity(n2)))));
        worst = std::max(worst, rel(fro_norm(lhs - diag_hat(fftq(a))), fro_norm(a)));
    }
    const double dt = now_s() - t0;
    report(1, "block-diagonalization over 100 seeded tensors",
           worst <= 1e-12 && dt < 5.0, "max rel residual " + fmt(worst) + ", " + fmt(dt) + " s");
}

void criterion2() {
    std::mt19937_64 rng(20250102);
    double worst_eq = 0.0, worst_path = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int n1 = 1 + static_cast<int>(rng() % 3), r = 1 + static_cast<int>(rng() % 3),
                  n2 = 1 + static_cast<int>(rng() % 3), n3 = 1 + static_cast<int>(rng() % 5);
        const QTensor a = random_uniform_tensor(n1, r, n3, rng);
        const QTensor b = random_uniform_tensor(r, n2, n3, rng);
        const double scale = fro_norm(a) * fro_norm(b);
        const QTensor cf = qt_product(a, b, ProductPath::fourier);
        const QTensor cd = qt_product(a, b, ProductPath::direct);
        worst_path = std::max(worst_path, rel(fro_norm(cf - cd), scale));
        worst_eq = std::max(
            worst_eq, rel(fro_norm(bcircz(cf).payload -
                                   mat_mul(bcircz(a).payload, bcircz(b).payload)),
                          scale));
    }
    report(2, "multiplicative equivalence over 100 seeded cases",
           worst_eq <= 1e-12 && worst_path <= 1e-12,
           "max rel equivalence " + fmt(worst_eq) + ", max path disagreement " + fmt(worst_path));
}

void criterion3() {
    std::mt19937_64 rng(20250103);
    bool ok = true;
    const double tol = 1e-10;
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 3), n3 = 1 + static_cast<int>(rng() % 4);
        const QTensor a = random_uniform_tensor(n, n, n3, rng);
        // ct equivalence on random input
        ok = ok && rel(fro_norm(bcircz(tensor_ct(a)).payload - mat_ct(bcircz(a).payload)),
                       fro_norm(a)) <= tol;
        // Hermitian: symmetrized tensor classified positive on both levels
        QTensor h = a;
        const QTensor act = tensor_ct(a);
        for (size_t t = 0; t < h.d.v.size(); ++t) {
            h.d.v[t] = 0.5 * (a.d.v[t] + act.d.v[t]);
            h.c.v[t] = 0.5 * (a.c.v[t] + act.c.v[t]);
        }
        ok = ok && is_hermitian_t(h, tol) && is_hermitian(bcircz(h).payload, tol);
        QTensor hb = h;
        hb.d.at(0, n - 1, 0) += cxd{0.4, 0.0};
        ok = ok && !is_hermitian_t(hb, tol) && !is_hermitian(bcircz(hb).payload, tol);
        // unitarity: polar factor classified positive on both levels
        const QTensor u = qt_polar(a).U;
        ok = ok && is_unitary_t(u, tol) && is_unitary(bcircz(u).payload, std::sqrt(double(n3)) * tol);
        QTensor ub = u;
        ub.d.at(0, 0, 0) += cxd{0.3, 0.0};
        ok = ok &&
             !is_unitary_t(ub, tol) && !is_unitary(bcircz(ub).payload, std::sqrt(double(n3)) * tol);
    }
    report(3, "conjugate-transpose / Hermitian / unitarity equivalences", ok,
           ok ? "all constructed cases classified correctly at tol 1e-10"
              : "classification mismatch");
}

void criterion4() {
    const PolarGolden g = load_polar_golden(kGolden);
    const QtPolar p = qt_polar(g.A);
    const double dh = max_entry_dist(p.H, g.H);
    const double res = rel(fro_norm(qt_product(p.U, p.H) - g.A), fro_norm(g.A));
    const bool unit = is_unitary_t(p.U, 1e-11);
    report(4, "polar golden example (3x3x2)", dh <= 5e-4 && res <= 1e-11 && unit,
           "max |H - golden| " + fmt(dh) + ", self-residual " + fmt(res) +
               (unit ? ", U unitary at 1e-11" : ", U NOT unitary"));
}

void criterion5() {
    const PluGolden g = load_plu_golden(kGolden);
    const QtPlu f = qt_plu(g.A);
    const bool pexact = max_entry_dist(f.Phat, g.Phat) == 0.0;
    const double dl = max_entry_dist(f.L, g.L);
    const double du = max_entry_dist(f.U, g.U);
    const double res = rel(fro_norm(qt_product(f.P, g.A) - qt_product(f.L, f.U)), fro_norm(g.A));
    report(5, "PLU golden example (3x3x2)",
           pexact && dl <= 5e-4 && du <= 5e-4 && res <= 1e-11,
           std::string(pexact ? "Phat exact" : "Phat differs") + ", |L-golden| " + fmt(dl) +
               ", |U-golden| " + fmt(du) + ", residual " + fmt(res));
}

void criterion6() {
    const SvdGolden g = load_svd_golden(kGolden);
    const QtSvd sv = qt_svd(g.A);
    const QMatrix stacked = diag_hat(fftq(sv.S));
    bool off_global = false;
    for (int r = 0; r < stacked.rows; ++r)
        for (int c = 0; c < stacked.cols; ++c)
            if (r != c && qnorm(stacked.q(r, c)) > 1e-9) off_global = true;
    const bool fdiag = is_f_diagonal(sv.S, 1e-12) && is_f_diagonal(fftq(sv.S), 1e-12);
    report(6, "SVD counterexample: diag(hat S) not globally diagonal", off_global && fdiag,
           std::string(off_global ? "off-diagonal mass present" : "unexpectedly diagonal") +
               (fdiag ? ", S and fftq(S) f-diagonal" : ", f-diagonality violated"));
}

struct SolveTimes {
    double structured225 = 0, dense225 = 0;
    double structured1125 = 0, dense1125 = 0;
    double structured2500 = 0, dense2500 = 0;
};

void criterion7(SolveTimes& times) {
    const double t0 = now_s();
    std::mt19937_64 rng(20250107);
    const int ms[4] = {3, 15, 75, 375};
    const double bounds[4] = {1e-12, 1e-12, 1e-11, 1e-10};
    bool ok = true;
    std::string detail;
    for (int t = 0; t < 4; ++t) {
        const QTensor g = random_uniform_tensor(ms[t], ms[t], 3, rng);
        const BCircZ b = bcircz(g);
        const double s0 = now_s();
        const BCircZ inv_s = bcircz_inv(b);
        const double st = now_s() - s0;
        if (ms[t] == 75) times.structured225 = st;
        if (ms[t] == 375) times.structured1125 = st;
        const double err = inv_err(b.payload, inv_s.payload);
        ok = ok && err <= bounds[t];
        detail += "n=" + std::to_string(3 * ms[t]) + " err " + fmt(err) + "; ";
    }
    const double dt = now_s() - t0;
    ok = ok && dt < 60.0;
    report(7, "bcircz_inv accuracy at n in {9,45,225,1125}", ok, detail + fmt(dt) + " s");
}

void criterion8(SolveTimes& times) {
    std::mt19937_64 rng(20250108);
    // n = 1125 with q = 3, best of two runs to damp scheduling noise
    {
        const QTensor g = random_uniform_tensor(375, 375, 3, rng);
        const BCircZ b = bcircz(g);
        times.structured1125 = 1e300;
        times.dense1125 = 1e300;
        for (int trial = 0; trial < 2; ++trial) {
            double t0 = now_s();
            const BCircZ s = bcircz_inv(b);
            times.structured1125 = std::min(times.structured1125, now_s() - t0);
            t0 = now_s();
            const QMatrix d = minv(b.payload);
            times.dense1125 = std::min(times.dense1125, now_s() - t0);
            (void)s;
            (void)d;
        }
    }
    // n = 2500 with q = 5
    {
        const QTensor g = random_uniform_tensor(500, 500, 5, rng);
        const BCircZ b = bcircz(g);
        double t0 = now_s();
        const BCircZ s = bcircz_inv(b);
        times.structured2500 = now_s() - t0;
        t0 = now_s();
        const QMatrix d = minv(b.payload);
        times.dense2500 = now_s() - t0;
        (void)s;
        (void)d;
    }
    // n = 225 for the scaling-slope property
    {
        const QTensor g = random_uniform_tensor(75, 75, 3, rng);
        const BCircZ b = bcircz(g);
        double t0 = now_s();
        const BCircZ s = bcircz_inv(b);
        times.structured225 = now_s() - t0;
        t0 = now_s();
        const QMatrix d = minv(b.payload);
        times.dense225 = now_s() - t0;
        (void)s;
        (void)d;
    }
    const double ratio1125 = times.dense1125 / times.structured1125;
    const double ratio2500 = times.dense2500 / times.structured2500;
    // log-log slopes: structured over {225,1125,2500}, dense over {1125,2500}
    const auto slope = [](double n0, double t0, double n1, double t1) {
        return std::log(t1 / t0) / std::log(n1 / n0);
    };
    const double slope_structured =
        slope(225.0, times.structured225, 2500.0, times.structured2500);
    const double slope_dense = slope(1125.0, times.dense1125, 2500.0, times.dense2500);
    const bool ok = ratio1125 >= 1.5 && ratio2500 >= 2.5 && slope_structured < slope_dense;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "speedup %.2fx at n=1125 (need 1.5), %.2fx at n=2500 (need 2.5); "
                  "times s/d: %.2f/%.2f @1125, %.2f/%.2f @2500; "
                  "log-log slope %.2f structured vs %.2f dense",
                  ratio1125, ratio2500, times.structured1125, times.dense1125,
                  times.structured2500, times.dense2500, slope_structured, slope_dense);
    report(8, "bcircz_inv speed vs dense inverse", ok, buf);
}

void criterion9() {
    std::mt19937_64 rng(20250109);
    bool ok = true;
    std::string detail;
    for (const auto& [m, q] : {std::pair{3, 3}, {5, 4}, {20, 15}}) {
        const QTensor g = random_uniform_tensor(m, m, q, rng);
        TikhonovProblem p{bcircz(g), random_uniform_qmatrix(m * q, 1, rng), 0.5};
        const QMatrix xs = tikhonov_structured(p);
        const QMatrix xd = tikhonov_dense(p);
        const double agree = rel(fro_norm(xs - xd), fro_norm(xd));
        const double res = tikhonov_residual(p, xs);
        ok = ok && agree <= 1e-10 && res <= 1e-10;
        detail += "(" + std::to_string(m) + "," + std::to_string(q) + ") agree " + fmt(agree) +
                  " res " + fmt(res) + "; ";
    }
    report(9, "Tikhonov structured vs dense with lambda=0.5", ok, detail);
}

void criterion10() {
    std::mt19937_64 rng(20250110);
    double worst = 0.0;
    bool structure = true;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 4), n3 = 1 + static_cast<int>(rng() % 6);
        const double tol = 1e-11;
        {
            const QTensor a = random_uniform_tensor(n, n, n3, rng);
            const QtPolar p = qt_polar(a);
            const double scale = fro_norm(a);
            worst = std::max(worst, rel(fro_norm(qt_product(p.U, p.H) - a), scale));
            worst = std::max(
                worst, rel(fro_norm(bcircz(a).payload -
                                    mat_mul(bcircz(p.U).payload, bcircz(p.H).payload)),
                           scale));
            structure = structure && is_unitary_t(p.U, tol) && is_hermitian_t(p.H, tol);
        }
        {
            const int n2 = 2 + static_cast<int>(rng() % 4);
            const QTensor a = random_uniform_tensor(n, n2, n3, rng);
            const QtSvd sv = qt_svd(a);
            const double scale = fro_norm(a);
            worst = std::max(
                worst,
                rel(fro_norm(qt_product(qt_product(sv.U, sv.S), tensor_ct(sv.V)) - a), scale));
            worst = std::max(
                worst, rel(fro_norm(bcircz(a).payload -
                                    mat_mul(mat_mul(bcircz(sv.U).payload, bcircz(sv.S).payload),
                                            mat_ct(bcircz(sv.V).payload))),
                           scale));
            structure = structure && is_unitary_t(sv.U, tol) && is_unitary_t(sv.V, tol) &&
                        is_f_diagonal(sv.S, 1e-12);
        }
        {
            QTensor a = random_uniform_tensor(n, n, n3, rng);
            for (int i = 0; i < n; ++i) a.d.at(i, i, 0) += 4.0 * n;
            const QtLu f = qt_lu(a);
            const double scale = fro_norm(a);
            worst = std::max(worst, rel(fro_norm(qt_product(f.L, f.U) - a), scale));
            worst = std::max(
                worst, rel(fro_norm(bcircz(a).payload -
                                    mat_mul(bcircz(f.L).payload, bcircz(f.U).payload)),
                           scale));
            structure = structure && is_unit_f_lower_triangular(f.L, tol) &&
                        is_f_upper_triangular(f.U, tol);
        }
    }
    report(10, "QT-SVD/QT-LU/QT-polar property suite (50 seeded each)",
           worst <= 1e-11 && structure,
           "max rel residual " + fmt(worst) + (structure ? "" : "; structure failed"));
}

void criterion11() {
    bool ok = true;
    std::string detail;
    {
        const FrameStack clip = make_test_clip(16, 16, 1);
        const ConsistencyReport r = consistency_metrics(FrameStack(6, clip[0]));
        ok = ok && r.tc_mean == 1.0 && r.tc_std && *r.tc_std == 0.0;
    }
    {
        Frame flat(8, 8);
        for (uint8_t& v : flat.rgb) v = 99;
        ok = ok && consistency_metrics(FrameStack(4, flat)).cc_mean == 1.0;
    }
    {
        std::mt19937_64 rng(20250111);
        std::uniform_real_distribution<double> ua(1e-3, 3.1405926);
        std::uniform_real_distribution<double> ub(-3.14, 3.14);
        RotationParams p;
        for (int i = 0; i < 12; ++i) {
            p.alpha.push_back(ua(rng));
            p.beta.push_back(ub(rng));
            p.gamma.push_back(ua(rng));
        }
        const RotationParams q = angles_from_unitary(synthesize_unitary(p));
        double dev = 0.0;
        for (size_t i = 0; i < p.size(); ++i)
            dev = std::max({dev, std::abs(p.alpha[i] - q.alpha[i]),
                            std::abs(p.beta[i] - q.beta[i]), std::abs(p.gamma[i] - q.gamma[i])});
        ok = ok && dev <= 1e-10;
        detail += "angle round-trip dev " + fmt(dev) + "; ";
    }
    {
        const FrameStack clip = read_frame_dir(kClip);
        const auto angles = schedule(ScheduleKind::same_linear, static_cast<int>(clip.size()));
        const ConsistencyReport r = consistency_metrics(rotate_frames(clip, angles));
        ok = ok && r.tc_mean >= 0.9;
        detail += "same_linear tc_mean " + fmt(r.tc_mean) + " on shipped 32x32x30 clip";
    }
    report(11, "media metrics and rotation identities", ok, detail);
}

void criterion12() {
    std::mt19937_64 rng(20250112);
    const auto dir = std::filesystem::temp_directory_path() / "qtz_acceptance_io";
    std::filesystem::create_directories(dir);
    std::uniform_real_distribution<double> wide(-1e9, 1e9);
    bool ok = true;
    for (int rep = 0; rep < 1000 && ok; ++rep) {
        const int n1 = 1 + static_cast<int>(rng() % 4), n2 = 1 + static_cast<int>(rng() % 4),
                  n3 = 1 + static_cast<int>(rng() % 4);
        QTensor t(n1, n2, n3);
        for (int k = 0; k < n3; ++k)
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j)
                    t.set(i, j, k, {wide(rng), wide(rng), wide(rng), wide(rng)});
        const std::string pb = (dir / "f.qtns").string(), pj = (dir / "f.json").string();
        write_tensor_bin(pb, t);
        write_tensor_json(pj, t);
        ok = ok && max_entry_dist(read_tensor_bin(pb), t) == 0.0 &&
             max_entry_dist(read_tensor_json(pj), t) == 0.0;
    }
    std::filesystem::remove_all(dir);
    report(12, "serialization fuzz: 1000 tensors bit-exact in both formats", ok,
           ok ? "all round trips exact" : "round-trip mismatch");
}

}  // namespace

int main() {
    std::printf("acceptance suite (single process, criteria in order)\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    SolveTimes times;
    criterion7(times);
    criterion8(times);
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
    return g_failures == 0 ? 0 : 1;
}
