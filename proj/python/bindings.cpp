// pybind11 module exposing the main tensor operations on numpy arrays.
// Quaternion tensors travel as float64 arrays of shape (n1, n2, n3, 4)
// holding (w, x, y, z); frame stacks as uint8 arrays of shape (n, h, w, 3).

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qtz/decomp.hpp"
#include "qtz/io.hpp"
#include "qtz/media.hpp"
#include "qtz/solve.hpp"

namespace py = pybind11;
using namespace qtz;

namespace {

QTensor tensor_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 4 || a.shape(3) != 4)
        throw ShapeMismatch("tensor array must have shape (n1, n2, n3, 4)");
    QTensor t(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
              static_cast<int>(a.shape(2)));
    const auto r = a.unchecked<4>();
    for (int i = 0; i < t.n1; ++i)
        for (int j = 0; j < t.n2; ++j)
            for (int k = 0; k < t.n3; ++k)
                t.set(i, j, k, {r(i, j, k, 0), r(i, j, k, 1), r(i, j, k, 2), r(i, j, k, 3)});
    return t;
}

py::array_t<double> tensor_to_array(const QTensor& t) {
    py::array_t<double> a({t.n1, t.n2, t.n3, 4});
    auto w = a.mutable_unchecked<4>();
    for (int i = 0; i < t.n1; ++i)
        for (int j = 0; j < t.n2; ++j)
            for (int k = 0; k < t.n3; ++k) {
                const Quaternion q = t.q(i, j, k);
                w(i, j, k, 0) = q.w;
                w(i, j, k, 1) = q.x;
                w(i, j, k, 2) = q.y;
                w(i, j, k, 3) = q.z;
            }
    return a;
}

QMatrix qmatrix_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 3 || a.shape(2) != 4)
        throw ShapeMismatch("matrix array must have shape (rows, cols, 4)");
    QMatrix m(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
    const auto r = a.unchecked<3>();
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.set(i, j, {r(i, j, 0), r(i, j, 1), r(i, j, 2), r(i, j, 3)});
    return m;
}

py::array_t<double> qmatrix_to_array(const QMatrix& m) {
    py::array_t<double> a({m.rows, m.cols, 4});
    auto w = a.mutable_unchecked<3>();
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) {
            const Quaternion q = m.q(i, j);
            w(i, j, 0) = q.w;
            w(i, j, 1) = q.x;
            w(i, j, 2) = q.y;
            w(i, j, 3) = q.z;
        }
    return a;
}

FrameStack frames_from_array(const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 4 || a.shape(3) != 3)
        throw ShapeMismatch("frame array must have shape (n, h, w, 3)");
    FrameStack out;
    const auto r = a.unchecked<4>();
    for (py::ssize_t f = 0; f < a.shape(0); ++f) {
        Frame fr(static_cast<int>(a.shape(2)), static_cast<int>(a.shape(1)));
        for (int y = 0; y < fr.h; ++y)
            for (int x = 0; x < fr.w; ++x)
                for (int c = 0; c < 3; ++c) fr.at(x, y, c) = r(f, y, x, c);
        out.push_back(std::move(fr));
    }
    return out;
}

py::array_t<uint8_t> frames_to_array(const FrameStack& frames) {
    const int n = static_cast<int>(frames.size());
    const int h = n > 0 ? frames[0].h : 0, w = n > 0 ? frames[0].w : 0;
    py::array_t<uint8_t> a({n, h, w, 3});
    auto r = a.mutable_unchecked<4>();
    for (int f = 0; f < n; ++f)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                for (int c = 0; c < 3; ++c) r(f, y, x, c) = frames[f].at(x, y, c);
    return a;
}

ProductPath product_path(const std::string& s) {
    if (s == "direct") return ProductPath::direct;
    if (s == "fourier") return ProductPath::fourier;
    throw UnknownKind("path must be 'direct' or 'fourier'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "quaternion z-block circulant tensor algebra";

    py::register_exception<ShapeMismatch>(m, "ShapeMismatchError", PyExc_ValueError);
    py::register_exception<Singular>(m, "SingularError", PyExc_ArithmeticError);
    py::register_exception<NoConvergence>(m, "NoConvergenceError", PyExc_ArithmeticError);
    py::register_exception<ZeroPivot>(m, "ZeroPivotError", PyExc_ArithmeticError);
    py::register_exception<StructureViolation>(m, "StructureViolationError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def(
        "qt_product",
        [](py::array_t<double> a, py::array_t<double> b, const std::string& path) {
            return tensor_to_array(
                qt_product(tensor_from_array(a), tensor_from_array(b), product_path(path)));
        },
        py::arg("a"), py::arg("b"), py::arg("path") = "fourier");

    m.def(
        "tensor_ct",
        [](py::array_t<double> a, const std::string& path) {
            return tensor_to_array(tensor_ct(
                tensor_from_array(a), path == "fourier" ? CtPath::fourier : CtPath::definition));
        },
        py::arg("a"), py::arg("path") = "definition");

    m.def("fftq", [](py::array_t<double> a) { return tensor_to_array(fftq(tensor_from_array(a))); });
    m.def("ifftq",
          [](py::array_t<double> a) { return tensor_to_array(ifftq(tensor_from_array(a))); });
    m.def("identity_tensor",
          [](int n, int n3) { return tensor_to_array(identity_tensor(n, n3)); });

    m.def("bcircz", [](py::array_t<double> a) {
        return qmatrix_to_array(bcircz(tensor_from_array(a)).payload);
    });
    m.def(
        "ibcircz",
        [](py::array_t<double> payload, int n3, bool validate) {
            return tensor_to_array(
                ibcircz(bcircz_from_payload(qmatrix_from_array(payload), n3), validate));
        },
        py::arg("payload"), py::arg("n3"), py::arg("validate") = false);

    m.def(
        "qt_polar",
        [](py::array_t<double> a, const std::string& side) {
            const QtPolar p = qt_polar(tensor_from_array(a),
                                       side == "left" ? PolarSide::left : PolarSide::right);
            return py::make_tuple(tensor_to_array(p.U), tensor_to_array(p.H));
        },
        py::arg("a"), py::arg("side") = "right");

    m.def("qt_svd", [](py::array_t<double> a) {
        const QtSvd sv = qt_svd(tensor_from_array(a));
        return py::make_tuple(tensor_to_array(sv.U), tensor_to_array(sv.S), tensor_to_array(sv.V),
                              sv.shat);
    });

    m.def("qt_plu", [](py::array_t<double> a) {
        const QtPlu f = qt_plu(tensor_from_array(a));
        return py::make_tuple(tensor_to_array(f.P), tensor_to_array(f.Phat), tensor_to_array(f.L),
                              tensor_to_array(f.U));
    });

    m.def("qt_lu", [](py::array_t<double> a) {
        const QtLu f = qt_lu(tensor_from_array(a));
        return py::make_tuple(tensor_to_array(f.L), tensor_to_array(f.U));
    });

    m.def(
        "bcircz_inv",
        [](py::array_t<double> generator) {
            const BCircZ b = bcircz(tensor_from_array(generator));
            const BCircZ inv = bcircz_inv(b);
            return py::make_tuple(tensor_to_array(ibcircz(inv)), inv_err(b.payload, inv.payload));
        },
        py::arg("generator"),
        "structured inverse of bcircz(generator); returns (inverse generator, err)");

    m.def(
        "tikhonov",
        [](py::array_t<double> system, py::array_t<double> rhs, double lam, bool structured) {
            const QTensor bt = tensor_from_array(system);
            const QTensor rt = tensor_from_array(rhs);
            TikhonovProblem p{bcircz(bt), unfold(rt), lam};
            const QMatrix x = structured ? tikhonov_structured(p) : tikhonov_dense(p);
            return py::make_tuple(tensor_to_array(fold(x, bt.n3)), tikhonov_residual(p, x));
        },
        py::arg("system"), py::arg("rhs"), py::arg("lam") = 0.5, py::arg("structured") = true,
        "solves (B^H B + lam^2 I) x = B^H b; rhs shape (m, 1, q, 4); returns (x, residual)");

    m.def(
        "rotate_frames",
        [](py::array_t<uint8_t> frames, py::array_t<double> deg) {
            if (deg.ndim() != 2 || deg.shape(1) != 3)
                throw ShapeMismatch("angles must have shape (n, 3)");
            std::vector<std::array<double, 3>> angles(deg.shape(0));
            const auto r = deg.unchecked<2>();
            for (py::ssize_t i = 0; i < deg.shape(0); ++i)
                angles[i] = {r(i, 0), r(i, 1), r(i, 2)};
            return frames_to_array(rotate_frames(frames_from_array(frames), angles));
        },
        py::arg("frames"), py::arg("degrees"));

    m.def(
        "schedule",
        [](const std::string& kind, int n) {
            const auto rows = schedule(schedule_kind_from_string(kind), n);
            py::array_t<double> a({n, 3});
            auto w = a.mutable_unchecked<2>();
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < 3; ++c) w(i, c) = rows[i][c];
            return a;
        },
        py::arg("kind"), py::arg("n"));

    m.def("consistency_metrics", [](py::array_t<uint8_t> frames) {
        const ConsistencyReport r = consistency_metrics(frames_from_array(frames));
        return py::make_tuple(r.tc_mean,
                              r.tc_std ? py::cast(*r.tc_std) : py::object(py::none()), r.cc_mean);
    });

    m.def(
        "angles_from_unitary",
        [](py::array_t<double> u) {
            const RotationParams p = angles_from_unitary(tensor_from_array(u));
            return py::make_tuple(p.alpha, p.beta, p.gamma);
        },
        py::arg("u"));
    m.def("synthesize_unitary",
          [](std::vector<double> alpha, std::vector<double> beta, std::vector<double> gamma) {
              RotationParams p;
              p.alpha = std::move(alpha);
              p.beta = std::move(beta);
              p.gamma = std::move(gamma);
              return tensor_to_array(synthesize_unitary(p));
          });

    m.def("read_tensor",
          [](const std::string& path) { return tensor_to_array(read_tensor(path)); });
    m.def(
        "write_tensor",
        [](const std::string& path, py::array_t<double> a, const std::string& fmt) {
            write_tensor(path, tensor_from_array(a), format_from_string(fmt));
        },
        py::arg("path"), py::arg("tensor"), py::arg("fmt") = "bin");

    m.def("fro_norm",
          [](py::array_t<double> a) { return fro_norm(tensor_from_array(a)); });
}
