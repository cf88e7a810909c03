#include "qtz/solve.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace qtz {

double inv_err(const QMatrix& a, const QMatrix& b) {
    if (a.rows != a.cols || b.rows != b.cols || a.rows != b.rows)
        throw ShapeMismatch("inv_err: matrices must be square and equal-sized");
    const QMatrix i = QMatrix::identity(a.rows);
    const double e1 = fro_norm(mat_mul(a, b) - i);
    const double e2 = fro_norm(mat_mul(b, a) - i);
    return std::max(e1, e2);
}

BCircZ bcircz_inv(const BCircZ& m, double tol_pivot, double tol_struct) {
    if (m.n1 != m.n2) throw ShapeMismatch("bcircz_inv: generator tensor not square");
    const QTensor t = ibcircz(m, /*validate=*/true, tol_struct);
    const QTensor that = fftq(t);
    const QMatrix eye = QMatrix::identity(m.n1);
    QTensor ihat(m.n1, m.n1, m.n3);
    for (int k = 0; k < m.n3; ++k) {
        try {
            const QMatrix a = that.slice(k);
            QMatrix x = minv(a, tol_pivot);
            // one Newton step sharpens the slice inverse to the product
            // round-off floor: X <- X + X(I - A X)
            const QMatrix r = eye - mat_mul(a, x);
            x = x + mat_mul(x, r);
            ihat.set_slice(k, x);
        } catch (const Singular& e) {
            throw Singular(std::string(e.what()) + " (hat slice " + std::to_string(k) + ")", k);
        }
    }
    return bcircz(ifftq(ihat));
}

namespace {

void check_problem(const TikhonovProblem& p) {
    if (p.B.n1 != p.B.n2) throw ShapeMismatch("tikhonov: system matrix not square");
    if (p.b.rows != p.B.n1 * p.B.n3 || p.b.cols != 1)
        throw ShapeMismatch("tikhonov: rhs length differs from system size");
    if (!(p.lambda > 0.0)) throw ShapeMismatch("tikhonov: lambda must be positive");
}

}  // namespace

QMatrix tikhonov_structured(const TikhonovProblem& p) {
    check_problem(p);
    const int m = p.B.n1, q = p.B.n3;
    const QTensor bt = ibcircz(p.B);
    const QTensor bhat = fftq(bt);
    const QTensor rhs_hat = fftq(fold(p.b, q));
    const double l2 = p.lambda * p.lambda;

    QTensor xhat(m, 1, q);
    for (int k = 0; k < q; ++k) {
        const QMatrix bk = bhat.slice(k);
        const QMatrix bkh = mat_ct(bk);
        QMatrix g = mat_mul(bkh, bk);
        for (int i = 0; i < m; ++i) g.d(i, i) += l2;
        const QMatrix r = mat_mul(bkh, rhs_hat.slice(k));
        xhat.set_slice(k, qsolve(g, r));
    }
    return unfold(ifftq(xhat));
}

QMatrix tikhonov_dense(const TikhonovProblem& p) {
    check_problem(p);
    const int n = p.B.n1 * p.B.n3;
    const QMatrix& payload = p.B.payload;
    const QMatrix ph = mat_ct(payload);
    QMatrix g = mat_mul(ph, payload);
    const double l2 = p.lambda * p.lambda;
    for (int i = 0; i < n; ++i) g.d(i, i) += l2;
    return mat_mul(minv(g), mat_mul(ph, p.b));
}

double tikhonov_residual(const TikhonovProblem& p, const QMatrix& x) {
    const QMatrix& payload = p.B.payload;
    const QMatrix ph = mat_ct(payload);
    const QMatrix rhs = mat_mul(ph, p.b);
    QMatrix lhs = mat_mul(ph, mat_mul(payload, x));
    const double l2 = p.lambda * p.lambda;
    for (size_t t = 0; t < lhs.d.a.size(); ++t) {
        lhs.d.a[t] += l2 * x.d.a[t];
        lhs.c.a[t] += l2 * x.c.a[t];
    }
    const double nrm = fro_norm(rhs);
    return fro_norm(lhs - rhs) / (nrm > 0.0 ? nrm : 1.0);
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
std::pair<double, double> time_best_mean(int trials, F&& body) {
    double best = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const double s = seconds_since(t0);
        best = std::min(best, s);
        sum += s;
    }
    return {best, sum / trials};
}

}  // namespace

std::vector<InvReport> bench(const std::vector<std::pair<int, int>>& sizes, int trials,
                             uint64_t seed, bool compute_inv_err, double lambda,
                             const std::string& csv_path) {
    if (trials < 1) trials = 1;
    std::vector<InvReport> reports;

    {
        // warm-up run, excluded from every report
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
        const QTensor g = random_uniform_tensor(8, 8, 3, rng);
        const BCircZ b = bcircz(g);
        (void)bcircz_inv(b);
        (void)minv(b.payload);
    }

    for (const auto& [m, q] : sizes) {
        std::mt19937_64 rng(seed + 1000003ull * m + q);
        const QTensor gen = random_uniform_tensor(m, m, q, rng);
        const BCircZ b = bcircz(gen);
        const int n = m * q;

        BCircZ inv_s;
        auto [ts_best, ts_mean] = time_best_mean(trials, [&] { inv_s = bcircz_inv(b); });
        QMatrix inv_d;
        auto [td_best, td_mean] = time_best_mean(trials, [&] { inv_d = minv(b.payload); });
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double err_s = compute_inv_err ? inv_err(b.payload, inv_s.payload) : nan;
        const double err_d = compute_inv_err ? inv_err(b.payload, inv_d) : nan;
        reports.push_back({n, "structured", ts_best, ts_mean, err_s});
        reports.push_back({n, "dense", td_best, td_mean, err_d});

        TikhonovProblem prob{b, random_uniform_qmatrix(n, 1, rng), lambda};
        QMatrix x_s, x_d;
        auto [tts_best, tts_mean] = time_best_mean(trials, [&] { x_s = tikhonov_structured(prob); });
        auto [ttd_best, ttd_mean] = time_best_mean(trials, [&] { x_d = tikhonov_dense(prob); });
        reports.push_back({n, "tikhonov_structured", tts_best, tts_mean, tikhonov_residual(prob, x_s)});
        reports.push_back({n, "tikhonov_dense", ttd_best, ttd_mean, tikhonov_residual(prob, x_d)});
    }

    if (!csv_path.empty()) {
        const std::string tmp = csv_path + ".tmp";
        {
            std::ofstream out(tmp);
            if (!out) throw IoError("bench: cannot open " + tmp);
            out << "size,method,time_s,err\n";
            char buf[160];
            for (const InvReport& r : reports) {
                std::snprintf(buf, sizeof buf, "%d,%s,%.6e,%.6e\n", r.n, r.method.c_str(),
                              r.seconds, r.err);
                out << buf;
            }
            if (!out) throw IoError("bench: write failed for " + tmp);
        }
        std::error_code ec;
        std::filesystem::rename(tmp, csv_path, ec);
        if (ec) throw IoError("bench: rename to " + csv_path + " failed");
    }
    return reports;
}

}  // namespace qtz
