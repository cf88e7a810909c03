#include "qtz/checks.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "qtz/decomp.hpp"
#include "qtz/io.hpp"
#include "qtz/media.hpp"
#include "qtz/solve.hpp"

namespace qtz {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string path_in(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

// worst relative deviation across the named quantity; pass when <= bound
struct Worst {
    double value = 0.0;
    void track(double v) { value = std::max(value, v); }
};

double rel(double num, double den) { return num / (den > 0.0 ? den : 1.0); }

QMatrix kron_fq(const CMat& f, int ncopies) { return complex_to_qmatrix(kron(f, CMat::identity(ncopies))); }

CheckResult check_dft_identities() {
    Worst w;
    for (int n = 1; n <= 64; ++n) {
        const CMat f = dft_matrix(n);
        const CMat p = reversal_perm_matrix(n);
        const CMat ff = matmul(f, f);
        const CMat fp = matmul(f, p);
        const CMat fstar = ctranspose(f);
        double dev = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                dev = std::max(dev, std::abs(ff(i, j) - p(i, j)));
                dev = std::max(dev, std::abs(fp(i, j) - fstar(i, j)));
            }
        w.track(dev);
    }
    return {"dft_identities (F*F = P, F*P = F^*)", w.value <= 1e-14,
            "max entry deviation " + fmt(w.value) + " over n <= 64"};
}

CheckResult check_block_diagonalization() {
    std::mt19937_64 rng(101);
    Worst w;
    for (int rep = 0; rep < 25; ++rep) {
        const int n1 = 1 + static_cast<int>(rng() % 4), n2 = 1 + static_cast<int>(rng() % 3),
                  n3 = 1 + static_cast<int>(rng() % 6);
        const QTensor a = random_uniform_tensor(n1, n2, n3, rng);
        const CMat f = dft_matrix(n3);
        const QMatrix lhs = mat_mul(mat_mul(kron_fq(f, n1), bcircz(a).payload),
                                    kron_fq(ctranspose(f), n2));
        const QMatrix rhs = diag_hat(fftq(a));
        w.track(rel(fro_norm(lhs - rhs), fro_norm(a)));
    }
    return {"block_diagonalization ((F(x)I) bcircz(A) (F*(x)I) = diag(fftq(A)))", w.value <= 1e-12,
            "max relative residual " + fmt(w.value)};
}

CheckResult check_multiplicative_equivalence() {
    std::mt19937_64 rng(102);
    Worst w;
    for (int rep = 0; rep < 25; ++rep) {
        const int n1 = 1 + static_cast<int>(rng() % 3), r = 1 + static_cast<int>(rng() % 3),
                  n2 = 1 + static_cast<int>(rng() % 3), n3 = 1 + static_cast<int>(rng() % 5);
        const QTensor a = random_uniform_tensor(n1, r, n3, rng);
        const QTensor b = random_uniform_tensor(r, n2, n3, rng);
        const QTensor c = qt_product(a, b, ProductPath::fourier);
        const QTensor c2 = qt_product(a, b, ProductPath::direct);
        const double scale = fro_norm(a) * fro_norm(b);
        w.track(rel(fro_norm(c - c2), scale));
        const QMatrix lhs = bcircz(c).payload;
        const QMatrix rhs = mat_mul(bcircz(a).payload, bcircz(b).payload);
        w.track(rel(fro_norm(lhs - rhs), scale));
    }
    return {"multiplicative_equivalence (bcircz(A *q B) = bcircz(A) bcircz(B))", w.value <= 1e-12,
            "max relative deviation " + fmt(w.value)};
}

CheckResult check_ct_equivalence() {
    std::mt19937_64 rng(103);
    Worst w;
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 4), n3 = 1 + static_cast<int>(rng() % 5);
        const QTensor a = random_uniform_tensor(n, n, n3, rng);
        const QTensor act = tensor_ct(a);
        const double scale = fro_norm(a);
        w.track(rel(fro_norm(bcircz(act).payload - mat_ct(bcircz(a).payload)), scale));
        w.track(rel(fro_norm(tensor_ct(act) - a), scale));
        w.track(rel(fro_norm(act - tensor_ct(a, CtPath::fourier)), scale));
    }
    return {"conjugate_transpose_equivalence (bcircz(A*) = bcircz(A)*)", w.value <= 1e-13,
            "max relative deviation " + fmt(w.value)};
}

CheckResult check_hermitian_equivalence() {
    std::mt19937_64 rng(104);
    bool ok = true;
    for (int rep = 0; rep < 10 && ok; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 3), n3 = 1 + static_cast<int>(rng() % 4);
        QTensor a = random_uniform_tensor(n, n, n3, rng);
        QTensor h = a;
        {
            const QTensor act = tensor_ct(a);
            for (size_t t = 0; t < h.d.v.size(); ++t) {
                h.d.v[t] = 0.5 * (a.d.v[t] + act.d.v[t]);
                h.c.v[t] = 0.5 * (a.c.v[t] + act.c.v[t]);
            }
        }
        ok = ok && is_hermitian_t(h, 1e-10) && is_hermitian(bcircz(h).payload, 1e-10);
        QTensor bad = h;
        bad.d.at(0, n - 1, 0) += cxd{0.37, 0.0};
        ok = ok && !is_hermitian_t(bad, 1e-10) && !is_hermitian(bcircz(bad).payload, 1e-10);
    }
    return {"hermitian_equivalence (A Hermitian iff bcircz(A) Hermitian)", ok,
            ok ? "positive and negative cases agree" : "classification mismatch"};
}

CheckResult check_unitarity_equivalence() {
    std::mt19937_64 rng(105);
    bool ok = true;
    for (int rep = 0; rep < 6 && ok; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 3), n3 = 1 + static_cast<int>(rng() % 3);
        const QTensor a = random_uniform_tensor(n, n, n3, rng);
        const QTensor u = qt_polar(a).U;
        const double tau = 1e-10;
        ok = ok && is_unitary_t(u, tau) && is_unitary(bcircz(u).payload, std::sqrt(double(n3)) * tau);
        QTensor bad = u;
        bad.d.at(0, 0, 0) += cxd{0.25, 0.0};
        ok = ok && !is_unitary_t(bad, tau) && !is_unitary(bcircz(bad).payload, std::sqrt(double(n3)) * tau);
    }
    return {"unitarity_equivalence (A unitary iff bcircz(A) unitary)", ok,
            ok ? "positive and negative cases agree" : "classification mismatch"};
}

CheckResult check_roundtrips() {
    std::mt19937_64 rng(106);
    Worst w;
    for (int rep = 0; rep < 20; ++rep) {
        const int n1 = 1 + static_cast<int>(rng() % 4), n2 = 1 + static_cast<int>(rng() % 4),
                  n3 = 1 + static_cast<int>(rng() % 6);
        const QTensor a = random_uniform_tensor(n1, n2, n3, rng);
        const double scale = fro_norm(a);
        w.track(rel(fro_norm(fold(unfold(a), n3) - a), scale));
        w.track(rel(fro_norm(ifftq(fftq(a)) - a), scale));
        w.track(rel(fro_norm(fftq(ifftq(a)) - a), scale));
        w.track(rel(fro_norm(ibcircz(bcircz(a), true) - a), scale));
        w.track(rel(fro_norm(idiag(diag_hat(a), n1, n2, n3) - a), scale));
    }
    return {"inverse_roundtrips (fold/unfold, fftq/ifftq, bcircz/ibcircz, diag/idiag)",
            w.value <= 1e-13, "max relative deviation " + fmt(w.value)};
}

CheckResult check_qt_polar() {
    std::mt19937_64 rng(107);
    Worst w;
    bool structure = true;
    for (int rep = 0; rep < 8; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 3), n3 = 1 + static_cast<int>(rng() % 4);
        const QTensor a = random_uniform_tensor(n, n, n3, rng);
        const QtPolar p = qt_polar(a);
        const double scale = fro_norm(a);
        w.track(rel(fro_norm(qt_product(p.U, p.H) - a), scale));
        w.track(rel(fro_norm(bcircz(a).payload -
                             mat_mul(bcircz(p.U).payload, bcircz(p.H).payload)),
                    scale));
        structure = structure && is_unitary_t(p.U, 1e-10) && is_hermitian_t(p.H, 1e-10);
        for (int k = 0; k < n3; ++k)
            structure = structure && is_psd(p.Hhat.slice(k), 1e-9);
    }
    return {"qt_polar_suite (A = U *q H; meanwhile identity; hat PSD)",
            structure && w.value <= 1e-11,
            "max relative residual " + fmt(w.value) + (structure ? "" : "; structure failed")};
}

CheckResult check_qt_svd() {
    std::mt19937_64 rng(108);
    Worst w;
    bool structure = true;
    for (int rep = 0; rep < 8; ++rep) {
        const int n1 = 2 + static_cast<int>(rng() % 4), n2 = 2 + static_cast<int>(rng() % 3),
                  n3 = 1 + static_cast<int>(rng() % 4);
        const QTensor a = random_uniform_tensor(n1, n2, n3, rng);
        const QtSvd sv = qt_svd(a);
        const double scale = fro_norm(a);
        const QTensor rec = qt_product(qt_product(sv.U, sv.S), tensor_ct(sv.V));
        w.track(rel(fro_norm(rec - a), scale));
        const QMatrix mrec = mat_mul(mat_mul(bcircz(sv.U).payload, bcircz(sv.S).payload),
                                     mat_ct(bcircz(sv.V).payload));
        w.track(rel(fro_norm(bcircz(a).payload - mrec), scale));
        structure = structure && is_unitary_t(sv.U, 1e-10) && is_unitary_t(sv.V, 1e-10) &&
                    is_f_diagonal(sv.S, 1e-12) && is_f_diagonal(fftq(sv.S), 1e-12);
    }
    return {"qt_svd_suite (A = U *q S *q V*; meanwhile identity; f-diagonal S)",
            structure && w.value <= 1e-11,
            "max relative residual " + fmt(w.value) + (structure ? "" : "; structure failed")};
}

CheckResult check_qt_plu() {
    std::mt19937_64 rng(109);
    Worst w;
    bool structure = true;
    for (int rep = 0; rep < 8; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 3), n3 = 1 + static_cast<int>(rng() % 4);
        const QTensor a = random_uniform_tensor(n, n, n3, rng);
        const QtPlu f = qt_plu(a);
        const double scale = fro_norm(a);
        w.track(rel(fro_norm(qt_product(f.P, a) - qt_product(f.L, f.U)), scale));
        w.track(rel(fro_norm(mat_mul(bcircz(f.P).payload, bcircz(a).payload) -
                             mat_mul(bcircz(f.L).payload, bcircz(f.U).payload)),
                    scale));
        structure = structure && is_f_permutation(f.Phat, 1e-12) &&
                    is_unit_f_lower_triangular(f.L, 1e-11) && is_f_upper_triangular(f.U, 1e-11);
    }
    return {"qt_plu_suite (P *q A = L *q U; meanwhile identity; structure)",
            structure && w.value <= 1e-11,
            "max relative residual " + fmt(w.value) + (structure ? "" : "; structure failed")};
}

CheckResult check_qt_lu() {
    std::mt19937_64 rng(110);
    Worst w;
    bool structure = true;
    for (int rep = 0; rep < 8; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 3), n3 = 1 + static_cast<int>(rng() % 4);
        QTensor a = random_uniform_tensor(n, n, n3, rng);
        // dominant hat diagonal keeps every leading pivot alive
        for (int i = 0; i < n; ++i) a.d.at(i, i, 0) += 4.0 * n;
        const QtLu f = qt_lu(a);
        const double scale = fro_norm(a);
        w.track(rel(fro_norm(qt_product(f.L, f.U) - a), scale));
        w.track(rel(fro_norm(mat_mul(bcircz(f.L).payload, bcircz(f.U).payload) -
                             bcircz(a).payload),
                    scale));
        structure = structure && is_unit_f_lower_triangular(f.L, 1e-11) &&
                    is_f_upper_triangular(f.U, 1e-11);
    }
    return {"qt_lu_suite (A = L *q U; meanwhile identity; structure)",
            structure && w.value <= 1e-11,
            "max relative residual " + fmt(w.value) + (structure ? "" : "; structure failed")};
}

CheckResult check_bcircz_inv() {
    std::mt19937_64 rng(111);
    Worst werr, wagree;
    for (const auto& [m, q] : {std::pair{3, 3}, {5, 3}, {5, 5}, {15, 3}}) {
        const QTensor g = random_uniform_tensor(m, m, q, rng);
        const BCircZ b = bcircz(g);
        const BCircZ inv_s = bcircz_inv(b);
        werr.track(inv_err(b.payload, inv_s.payload));
        const QMatrix inv_d = minv(b.payload);
        wagree.track(rel(fro_norm(inv_s.payload - inv_d), fro_norm(inv_d)));
    }
    return {"bcircz_inv (five-step structured inverse vs dense adjoint inverse)",
            werr.value <= 1e-12 && wagree.value <= 1e-10,
            "max err " + fmt(werr.value) + ", max disagreement " + fmt(wagree.value)};
}

CheckResult check_tikhonov() {
    std::mt19937_64 rng(112);
    Worst w, wres;
    for (const auto& [m, q] : {std::pair{3, 3}, {5, 4}, {4, 5}}) {
        const QTensor g = random_uniform_tensor(m, m, q, rng);
        TikhonovProblem p{bcircz(g), random_uniform_qmatrix(m * q, 1, rng), 0.5};
        const QMatrix xs = tikhonov_structured(p);
        const QMatrix xd = tikhonov_dense(p);
        w.track(rel(fro_norm(xs - xd), fro_norm(xd)));
        wres.track(tikhonov_residual(p, xs));
    }
    return {"tikhonov (structured normal equations vs dense reference)",
            w.value <= 1e-10 && wres.value <= 1e-10,
            "max path disagreement " + fmt(w.value) + ", max residual " + fmt(wres.value)};
}

CheckResult check_serialization() {
    std::mt19937_64 rng(113);
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "qtz_verify_roundtrip";
    std::filesystem::create_directories(dir);
    bool ok = true;
    for (int rep = 0; rep < 100 && ok; ++rep) {
        const int n1 = 1 + static_cast<int>(rng() % 4), n2 = 1 + static_cast<int>(rng() % 4),
                  n3 = 1 + static_cast<int>(rng() % 4);
        const QTensor a = random_uniform_tensor(n1, n2, n3, rng);
        const std::string pb = (dir / "t.qtns").string(), pj = (dir / "t.json").string();
        write_tensor_bin(pb, a);
        write_tensor_json(pj, a);
        const QTensor rb = read_tensor_bin(pb), rj = read_tensor_json(pj);
        ok = ok && max_entry_dist(a, rb) == 0.0 && max_entry_dist(a, rj) == 0.0;
    }
    std::filesystem::remove_all(dir);
    return {"serialization_roundtrip (bit-exact, both formats)", ok,
            ok ? "100 seeded tensors round-tripped" : "round-trip mismatch"};
}

CheckResult check_media() {
    bool ok = true;
    std::string why;
    {
        FrameStack clip = make_test_clip(16, 16, 5);
        FrameStack constant(5, clip[0]);
        const ConsistencyReport r = consistency_metrics(constant);
        if (!(r.tc_mean == 1.0 && r.tc_std && *r.tc_std == 0.0)) {
            ok = false;
            why = "constant clip metrics";
        }
    }
    {
        Frame flat(8, 8);
        for (uint8_t& v : flat.rgb) v = 77;
        const ConsistencyReport r = consistency_metrics(FrameStack(3, flat));
        if (r.cc_mean != 1.0) {
            ok = false;
            why = "flat-gray cc_mean";
        }
    }
    {
        RotationParams p;
        p.alpha = {1.0471975511965976, 0.4};  // pi/3
        p.beta = {0.7853981633974483, -1.1};  // pi/4
        p.gamma = {0.5235987755982988, 2.0};  // pi/6
        const QTensor u = synthesize_unitary(p);
        if (!is_unitary_t(u, 1e-11)) {
            ok = false;
            why = "synthesized tensor not unitary";
        }
        const RotationParams q = angles_from_unitary(u);
        for (size_t i = 0; i < p.size(); ++i) {
            const double dev = std::max({std::abs(p.alpha[i] - q.alpha[i]),
                                         std::abs(p.beta[i] - q.beta[i]),
                                         std::abs(p.gamma[i] - q.gamma[i])});
            if (dev > 1e-10) {
                ok = false;
                why = "angle round-trip deviation " + fmt(dev);
            }
        }
    }
    return {"media_suite (metric edge cases; synthesize/extract round-trip)", ok,
            ok ? "all media identities hold" : why};
}

CheckResult check_golden_polar(const std::string& data_dir) {
    const PolarGolden g = load_polar_golden(data_dir);
    const QtPolar p = qt_polar(g.A);
    const double dh = max_entry_dist(p.H, g.H);
    const double du = max_entry_dist(p.U, g.U);
    const double res = rel(fro_norm(qt_product(p.U, p.H) - g.A), fro_norm(g.A));
    const bool pass = dh <= 5e-4 && du <= 5e-4 && res <= 1e-11 && is_unitary_t(p.U, 1e-11);
    return {"golden_polar (reference 3x3x2 example)", pass,
            "max |H - golden| " + fmt(dh) + ", max |U - golden| " + fmt(du) + ", residual " +
                fmt(res)};
}

CheckResult check_golden_plu(const std::string& data_dir) {
    const PluGolden g = load_plu_golden(data_dir);
    const QtPlu f = qt_plu(g.A);
    const bool perm_exact = max_entry_dist(f.Phat, g.Phat) == 0.0;
    const double dl = max_entry_dist(f.L, g.L);
    const double du = max_entry_dist(f.U, g.U);
    const double dp = max_entry_dist(f.P, g.P);
    const double res =
        rel(fro_norm(qt_product(f.P, g.A) - qt_product(f.L, f.U)), fro_norm(g.A));
    const bool pass = perm_exact && dl <= 5e-4 && du <= 5e-4 && dp <= 5e-4 && res <= 1e-11;
    return {"golden_plu (reference 3x3x2 example)", pass,
            std::string(perm_exact ? "Phat exact" : "Phat differs") + ", max |L-golden| " +
                fmt(dl) + ", max |U-golden| " + fmt(du) + ", residual " + fmt(res)};
}

CheckResult check_golden_svd(const std::string& data_dir) {
    const SvdGolden g = load_svd_golden(data_dir);
    const QTensor ahat = fftq(g.A);
    const double dhat = max_entry_dist(ahat, g.Ahat);
    const QtSvd sv = qt_svd(g.A);
    double dsig = 0.0;
    for (size_t k = 0; k < g.shat.size(); ++k)
        for (size_t t = 0; t < g.shat[k].size(); ++t)
            dsig = std::max(dsig, std::abs(sv.shat[k][t] - g.shat[k][t]));
    // diag of the hat singular-value slices is NOT diagonal as a stacked matrix
    const QMatrix dh = diag_hat(fftq(sv.S));
    bool offdiag = false;
    for (int r = 0; r < dh.rows; ++r)
        for (int c = 0; c < dh.cols; ++c)
            if (r != c && qnorm(dh.q(r, c)) > 1e-9) offdiag = true;
    const bool fdiag = is_f_diagonal(sv.S, 1e-12) && is_f_diagonal(fftq(sv.S), 1e-12);
    const bool pass = dhat <= 5e-4 && dsig <= 5e-4 && offdiag && fdiag;
    return {"golden_svd (reference 3x2x3 counterexample)", pass,
            "max |fftq(A) - golden| " + fmt(dhat) + ", max hat singular value dev " + fmt(dsig) +
                (offdiag ? ", diag(shat) not diagonal" : ", diag(shat) unexpectedly diagonal")};
}

}  // namespace

double max_entry_dist(const QTensor& a, const QTensor& b) {
    if (a.n1 != b.n1 || a.n2 != b.n2 || a.n3 != b.n3)
        throw ShapeMismatch("max_entry_dist: shapes differ");
    double m = 0.0;
    for (int k = 0; k < a.n3; ++k)
        for (int i = 0; i < a.n1; ++i)
            for (int j = 0; j < a.n2; ++j) m = std::max(m, qnorm(a.q(i, j, k) - b.q(i, j, k)));
    return m;
}

PolarGolden load_polar_golden(const std::string& d) {
    return {read_tensor_json(path_in(d, "polar_A.json")),
            read_tensor_json(path_in(d, "polar_U.json")),
            read_tensor_json(path_in(d, "polar_H.json"))};
}

PluGolden load_plu_golden(const std::string& d) {
    return {read_tensor_json(path_in(d, "plu_A.json")), read_tensor_json(path_in(d, "plu_L.json")),
            read_tensor_json(path_in(d, "plu_U.json")), read_tensor_json(path_in(d, "plu_P.json")),
            read_tensor_json(path_in(d, "plu_Phat.json"))};
}

SvdGolden load_svd_golden(const std::string& d) {
    SvdGolden g;
    g.A = read_tensor_json(path_in(d, "svd_A.json"));
    g.Ahat = read_tensor_json(path_in(d, "svd_Ahat.json"));
    std::ifstream in(path_in(d, "svd_shat.json"));
    if (!in) throw IoError("cannot open " + path_in(d, "svd_shat.json"));
    nlohmann::json root = nlohmann::json::parse(in);
    for (const auto& slice : root.at("slices")) {
        std::vector<double> vals;
        for (const auto& v : slice) vals.push_back(v.get<double>());
        g.shat.push_back(std::move(vals));
    }
    return g;
}

std::vector<CheckResult> run_verify_checks(const std::string& data_dir) {
    std::vector<CheckResult> out;
    out.push_back(check_dft_identities());
    out.push_back(check_block_diagonalization());
    out.push_back(check_multiplicative_equivalence());
    out.push_back(check_ct_equivalence());
    out.push_back(check_hermitian_equivalence());
    out.push_back(check_unitarity_equivalence());
    out.push_back(check_roundtrips());
    out.push_back(check_qt_polar());
    out.push_back(check_qt_svd());
    out.push_back(check_qt_plu());
    out.push_back(check_qt_lu());
    out.push_back(check_bcircz_inv());
    out.push_back(check_tikhonov());
    out.push_back(check_serialization());
    out.push_back(check_media());
    out.push_back(check_golden_polar(data_dir));
    out.push_back(check_golden_plu(data_dir));
    out.push_back(check_golden_svd(data_dir));
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace qtz
