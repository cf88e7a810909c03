// qtz: quaternion z-block circulant tensor algebra command line tool.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qtz/checks.hpp"
#include "qtz/decomp.hpp"
#include "qtz/io.hpp"
#include "qtz/media.hpp"
#include "qtz/solve.hpp"

#ifndef QTZ_DEFAULT_DATA_DIR
#define QTZ_DEFAULT_DATA_DIR "data/golden"
#endif

namespace {

using nlohmann::json;
using namespace qtz;

void write_report(const std::string& path, const json& j) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot open " + tmp);
        out << j.dump(2) << "\n";
        if (!out) throw IoError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename to " + path + " failed");
}

const char* ext(TensorFormat f) { return f == TensorFormat::bin ? ".qtns" : ".json"; }

double rel_residual(const QTensor& delta, const QTensor& ref) {
    const double n = fro_norm(ref);
    return fro_norm(delta) / (n > 0.0 ? n : 1.0);
}

int cmd_decompose(const std::string& kind, const std::string& in, const std::string& out,
                  TensorFormat fmt, const std::string& side) {
    const QTensor a = read_tensor(in);
    json rep;
    rep["op"] = kind;
    rep["input"] = in;

    if (kind == "polar") {
        const QtPolar p = qt_polar(a, side == "left" ? PolarSide::left : PolarSide::right);
        write_tensor(out + ".U" + ext(fmt), p.U, fmt);
        write_tensor(out + ".H" + ext(fmt), p.H, fmt);
        const QTensor rec = side == "left" ? qt_product(p.H, p.U) : qt_product(p.U, p.H);
        rep["side"] = side;
        rep["residual_rel"] = rel_residual(rec - a, a);
        rep["U_unitary_1e-11"] = is_unitary_t(p.U, 1e-11);
        rep["H_hermitian_1e-11"] = is_hermitian_t(p.H, 1e-11);
        json psd = json::array();
        for (int k = 0; k < a.n3; ++k) psd.push_back(is_psd(p.Hhat.slice(k), 1e-9));
        rep["Hhat_slices_psd_1e-9"] = psd;
        // reported, not asserted: PSD status of the spatial slices
        json spatial = json::array();
        for (int k = 0; k < a.n3; ++k) spatial.push_back(is_psd(p.H.slice(k), 1e-9));
        rep["H_spatial_slices_psd_informational"] = spatial;
    } else if (kind == "svd") {
        const QtSvd sv = qt_svd(a);
        write_tensor(out + ".U" + ext(fmt), sv.U, fmt);
        write_tensor(out + ".S" + ext(fmt), sv.S, fmt);
        write_tensor(out + ".V" + ext(fmt), sv.V, fmt);
        const QTensor rec = qt_product(qt_product(sv.U, sv.S), tensor_ct(sv.V));
        rep["residual_rel"] = rel_residual(rec - a, a);
        rep["U_unitary_1e-11"] = is_unitary_t(sv.U, 1e-11);
        rep["V_unitary_1e-11"] = is_unitary_t(sv.V, 1e-11);
        rep["S_f_diagonal"] = is_f_diagonal(sv.S, 1e-12);
        rep["Shat_f_diagonal"] = is_f_diagonal(fftq(sv.S), 1e-12);
        rep["hat_singular_values"] = sv.shat;
    } else if (kind == "plu") {
        const QtPlu f = qt_plu(a);
        write_tensor(out + ".P" + ext(fmt), f.P, fmt);
        write_tensor(out + ".Phat" + ext(fmt), f.Phat, fmt);
        write_tensor(out + ".L" + ext(fmt), f.L, fmt);
        write_tensor(out + ".U" + ext(fmt), f.U, fmt);
        rep["residual_rel"] = rel_residual(qt_product(f.P, a) - qt_product(f.L, f.U), a);
        rep["Phat_f_permutation"] = is_f_permutation(f.Phat, 1e-12);
        rep["L_unit_f_lower_triangular"] = is_unit_f_lower_triangular(f.L, 1e-11);
        rep["U_f_upper_triangular"] = is_f_upper_triangular(f.U, 1e-11);
    } else if (kind == "lu") {
        const QtLu f = qt_lu(a);
        write_tensor(out + ".L" + ext(fmt), f.L, fmt);
        write_tensor(out + ".U" + ext(fmt), f.U, fmt);
        rep["residual_rel"] = rel_residual(qt_product(f.L, f.U) - a, a);
        rep["L_unit_f_lower_triangular"] = is_unit_f_lower_triangular(f.L, 1e-11);
        rep["U_f_upper_triangular"] = is_f_upper_triangular(f.U, 1e-11);
    } else {
        throw UnknownKind("decompose: unknown kind '" + kind + "'");
    }
    write_report(out + ".report.json", rep);
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_mul(const std::string& in, const std::string& in2, const std::string& out,
            const std::string& path, TensorFormat fmt) {
    const QTensor a = read_tensor(in), b = read_tensor(in2);
    const QTensor direct = qt_product(a, b, ProductPath::direct);
    const QTensor fourier = qt_product(a, b, ProductPath::fourier);
    const QTensor& result = path == "direct" ? direct : fourier;
    write_tensor(out, result, fmt);
    json rep;
    rep["op"] = "mul";
    const double scale = fro_norm(a) * fro_norm(b);
    rep["path_agreement_rel"] = fro_norm(direct - fourier) / (scale > 0.0 ? scale : 1.0);
    write_report(out + ".report.json", rep);
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_ct(const std::string& in, const std::string& out, const std::string& path,
           TensorFormat fmt) {
    const QTensor a = read_tensor(in);
    write_tensor(out, tensor_ct(a, path == "fourier" ? CtPath::fourier : CtPath::definition), fmt);
    return 0;
}

int cmd_inv(const std::string& in, const std::string& out, TensorFormat fmt, double tol_pivot,
            double tol_struct) {
    const QTensor a = read_tensor(in);
    if (a.n1 != a.n2) throw ShapeMismatch("inv: tensor slices must be square");
    const BCircZ b = bcircz(a);
    const BCircZ binv = bcircz_inv(b, tol_pivot, tol_struct);
    const QTensor gen = ibcircz(binv);
    write_tensor(out, gen, fmt);
    json rep;
    rep["op"] = "inv";
    rep["n"] = b.n1 * b.n3;
    rep["err"] = inv_err(b.payload, binv.payload);
    write_report(out + ".report.json", rep);
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_tikhonov(const std::string& in, const std::string& in2, const std::string& out,
                 double lambda, TensorFormat fmt) {
    const QTensor bt = read_tensor(in);
    if (bt.n1 != bt.n2) throw ShapeMismatch("tikhonov: system tensor slices must be square");
    const QTensor rhs_t = read_tensor(in2);
    if (rhs_t.n2 != 1 || rhs_t.n1 != bt.n1 || rhs_t.n3 != bt.n3)
        throw ShapeMismatch("tikhonov: rhs must be m x 1 x q matching the system tensor");
    TikhonovProblem prob{bcircz(bt), unfold(rhs_t), lambda};
    const QMatrix x = tikhonov_structured(prob);
    write_tensor(out, fold(x, bt.n3), fmt);
    json rep;
    rep["op"] = "tikhonov";
    rep["lambda"] = lambda;
    rep["normal_equation_residual_rel"] = tikhonov_residual(prob, x);
    write_report(out + ".report.json", rep);
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_rotate(const std::string& frames_dir, const std::string& out_dir,
               const std::string& kind_s, const ScheduleParams& sp) {
    const FrameStack frames = read_frame_dir(frames_dir);
    const ScheduleKind kind = schedule_kind_from_string(kind_s);
    const auto angles = schedule(kind, static_cast<int>(frames.size()), sp);
    write_frame_dir(out_dir, rotate_frames(frames, angles));
    std::cout << "rotated " << frames.size() << " frames with schedule " << kind_s << "\n";
    return 0;
}

int cmd_metrics(const std::string& frames_dir, const std::string& out_csv) {
    const FrameStack frames = read_frame_dir(frames_dir);
    const ConsistencyReport r = consistency_metrics(frames);
    std::ostringstream csv;
    csv << "tc_mean,tc_std,cc_mean\n";
    char buf[96];
    if (r.tc_std)
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", r.tc_mean, *r.tc_std, r.cc_mean);
    else
        std::snprintf(buf, sizeof buf, "%.6f,,%.6f\n", r.tc_mean, r.cc_mean);
    csv << buf;
    if (!out_csv.empty()) {
        const std::string tmp = out_csv + ".tmp";
        {
            std::ofstream out(tmp);
            if (!out) throw IoError("cannot open " + tmp);
            out << csv.str();
            if (!out) throw IoError("write failed for " + tmp);
        }
        std::error_code ec;
        std::filesystem::rename(tmp, out_csv, ec);
        if (ec) throw IoError("rename to " + out_csv + " failed");
        json meta;
        meta["frames"] = frames.size();
        meta["grayscale"] = "luma 0.299*R + 0.587*G + 0.114*B";
        meta["stddev"] = "population (divide by pixel count)";
        meta["tc_std_divisor"] = "N-2";
        write_report(out_csv + ".meta.json", meta);
    }
    std::printf("grayscale: luma 0.299/0.587/0.114; stddev: population form\n");
    std::printf("%-28s %-28s %-24s\n", "temporal consistency mean", "temporal consistency std",
                "color consistency mean");
    if (r.tc_std)
        std::printf("%-28.4f %-28.4f %-24.4f\n", r.tc_mean, *r.tc_std, r.cc_mean);
    else
        std::printf("%-28.4f %-28s %-24.4f\n", r.tc_mean, "n/a (fewer than 3 frames)", r.cc_mean);
    return 0;
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& spec) {
    std::vector<std::pair<int, int>> sizes;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        int m = 0, q = 0;
        if (std::sscanf(item.c_str(), "%d,%d", &m, &q) != 2 || m <= 0 || q <= 0)
            throw UnknownKind("bench: bad --sizes entry '" + item + "' (want m,q;m,q;...)");
        sizes.emplace_back(m, q);
    }
    if (sizes.empty()) throw UnknownKind("bench: --sizes is empty");
    return sizes;
}

int cmd_bench(const std::string& sizes_s, int trials, uint64_t seed, bool no_err, double lambda,
              const std::string& out_csv) {
    const auto sizes = parse_sizes(sizes_s);
    const auto reports = bench(sizes, trials, seed, !no_err, lambda, out_csv);
    std::printf("%8s  %-20s %12s %12s %12s\n", "size", "method", "best_s", "mean_s", "err");
    for (const InvReport& r : reports)
        std::printf("%8d  %-20s %12.4f %12.4f %12.3e\n", r.n, r.method.c_str(), r.seconds,
                    r.mean_seconds, r.err);
    if (!out_csv.empty()) std::cout << "csv written to " << out_csv << "\n";
    return 0;
}

int cmd_verify(const std::string& data_dir) {
    const auto results = run_verify_checks(data_dir);
    bool ok = true;
    for (const CheckResult& r : results) {
        std::printf("%-4s %s\n      %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        ok = ok && r.pass;
    }
    std::printf("%d/%zu checks passed\n", static_cast<int>(std::count_if(
                    results.begin(), results.end(), [](const auto& r) { return r.pass; })),
                results.size());
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quaternion z-block circulant tensor algebra"};
    app.require_subcommand(1);
    app.footer(
        "file formats:\n"
        "  .qtns  binary tensor: 48-byte header (magic \"QTNS1\\n\", three u64 LE dims,\n"
        "         zero padding), then (w,x,y,z) f64 LE quadruples in (slice,row,col) order;\n"
        "         file size is exactly 48 + 32*n1*n2*n3 bytes\n"
        "  .json  {\"dims\":[n1,n2,n3],\"slices\":[[[[w,x,y,z],...]]]} in the same order\n"
        "  bench/metrics CSV: UTF-8, comma separated, '.' decimal, scientific notation ok\n"
        "  frames: binary PPM (P6, maxval 255) sequences named frame_%06d.ppm");

    std::string in, in2, out, fmt_s = "bin", path_s = "fourier", side = "right";
    std::string frames_dir, schedule_s = "same_linear", data_dir = QTZ_DEFAULT_DATA_DIR;
    std::string sizes_s = "3,3;15,3";
    double lambda = 0.5, tol_pivot = 1e-13, tol_struct = 1e-12;
    int trials = 1;
    uint64_t seed = 42;
    bool no_err = false;
    ScheduleParams sp;

    auto* dec = app.add_subcommand("decompose", "QT-polar/svd/plu/lu of a tensor file");
    std::string dec_kind;
    dec->add_option("kind", dec_kind, "polar|svd|plu|lu")->required();
    dec->add_option("--in", in, "input tensor file")->required();
    dec->add_option("--out", out, "output basename; factors written as <out>.<factor>")->required();
    dec->add_option("--format", fmt_s, "bin|json (default bin)")
        ->check(CLI::IsMember({"bin", "json"}));
    dec->add_option("--side", side, "polar side: right|left")
        ->check(CLI::IsMember({"right", "left"}));

    auto* mul = app.add_subcommand("mul", "QT-product of two tensor files");
    mul->add_option("--in", in)->required();
    mul->add_option("--in2", in2)->required();
    mul->add_option("--out", out)->required();
    mul->add_option("--path", path_s, "direct|fourier")
        ->check(CLI::IsMember({"direct", "fourier"}));
    mul->add_option("--format", fmt_s)->check(CLI::IsMember({"bin", "json"}));

    auto* ct = app.add_subcommand("ct", "tensor conjugate transpose");
    std::string ct_path = "definition";
    ct->add_option("--in", in)->required();
    ct->add_option("--out", out)->required();
    ct->add_option("--path", ct_path, "definition|fourier")
        ->check(CLI::IsMember({"definition", "fourier"}));
    ct->add_option("--format", fmt_s)->check(CLI::IsMember({"bin", "json"}));

    auto* inv = app.add_subcommand("inv", "structure-accelerated inverse of bcircz(tensor)");
    inv->add_option("--in", in)->required();
    inv->add_option("--out", out, "output tensor: generator of the inverse")->required();
    inv->add_option("--format", fmt_s);
    inv->add_option("--tol-pivot", tol_pivot, "relative pivot threshold of the LU solves");
    inv->add_option("--tol-struct", tol_struct, "z-block circulant validation tolerance");

    auto* tik = app.add_subcommand("tikhonov", "solve (B^H B + lambda^2 I) x = B^H b");
    tik->add_option("--in", in, "system generator tensor (m x m x q)")->required();
    tik->add_option("--in2", in2, "right-hand side tensor (m x 1 x q)")->required();
    tik->add_option("--out", out)->required();
    tik->add_option("--lambda", lambda, "regularization weight (default 0.5)");
    tik->add_option("--format", fmt_s);

    auto* rot = app.add_subcommand("rotate", "rotate RGB channel planes of a frame sequence");
    rot->add_option("--frames", frames_dir, "directory with frame_%06d.ppm")->required();
    rot->add_option("--out", out)->required();
    rot->add_option("--schedule", schedule_s,
                    "same_linear|diff_linear|fixed_step|sine_phase|log_growth");
    rot->add_option("--offsets", sp.offsets, "diff_linear per-channel start angles (deg)");
    rot->add_option("--steps", sp.steps, "fixed_step per-channel step (deg/frame)");
    rot->add_option("--amplitude", sp.amplitude, "sine_phase amplitude (deg)");
    rot->add_option("--omega", sp.omega, "sine_phase frequency (rad/frame)");
    rot->add_option("--phases", sp.phases, "sine_phase per-channel phase (rad)");
    rot->add_option("--log-coeffs", sp.log_coeffs, "log_growth per-channel coefficient");

    auto* met = app.add_subcommand("metrics", "temporal/color consistency of a frame sequence");
    met->add_option("--frames", frames_dir)->required();
    met->add_option("--out", out, "CSV output path");

    auto* ben = app.add_subcommand("bench", "time structured vs dense inversion and Tikhonov");
    ben->add_option("--sizes", sizes_s, "m,q;m,q;... (default 3,3;15,3)");
    ben->add_option("--trials", trials, "timed repetitions per method");
    ben->add_option("--seed", seed);
    ben->add_option("--lambda", lambda);
    ben->add_flag("--no-err", no_err, "skip the expensive inverse err column");
    ben->add_option("--out", out, "CSV output path");

    auto* ver = app.add_subcommand("verify", "replay invariant suites and golden examples");
    ver->add_option("--data", data_dir, "directory with the golden JSON files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // usage errors map to exit 1, --help stays 0
    }

    try {
        if (dec->parsed()) return cmd_decompose(dec_kind, in, out, format_from_string(fmt_s), side);
        if (mul->parsed()) return cmd_mul(in, in2, out, path_s, format_from_string(fmt_s));
        if (ct->parsed()) return cmd_ct(in, out, ct_path, format_from_string(fmt_s));
        if (inv->parsed()) return cmd_inv(in, out, format_from_string(fmt_s), tol_pivot, tol_struct);
        if (tik->parsed()) return cmd_tikhonov(in, in2, out, lambda, format_from_string(fmt_s));
        if (rot->parsed()) return cmd_rotate(frames_dir, out, schedule_s, sp);
        if (met->parsed()) return cmd_metrics(frames_dir, out);
        if (ben->parsed()) return cmd_bench(sizes_s, trials, seed, no_err, lambda, out);
        if (ver->parsed()) return cmd_verify(data_dir);
    } catch (const Singular& e) {
        std::cerr << "numerical failure (singular): " << e.what() << "\n";
        return 2;
    } catch (const NoConvergence& e) {
        std::cerr << "numerical failure (no convergence): " << e.what() << "\n";
        return 2;
    } catch (const ZeroPivot& e) {
        std::cerr << "numerical failure (zero pivot): " << e.what() << "\n";
        return 2;
    } catch (const NotPureUnit& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const StructureViolation& e) {
        std::cerr << "structure violation: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
