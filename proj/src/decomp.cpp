#include "qtz/decomp.hpp"

#include <string>

namespace qtz {

QtPolar qt_polar(const QTensor& a, PolarSide side) {
    if (a.n1 != a.n2) throw ShapeMismatch("qt_polar: tensor slices not square");
    const QTensor ah = fftq(a);
    QtPolar out;
    out.Uhat = QTensor(a.n1, a.n1, a.n3);
    out.Hhat = QTensor(a.n1, a.n1, a.n3);
    for (int k = 0; k < a.n3; ++k) {
        try {
            const MPolar p =
                side == PolarSide::right ? mpolar_right(ah.slice(k)) : mpolar_left(ah.slice(k));
            out.Uhat.set_slice(k, p.U);
            out.Hhat.set_slice(k, p.H);
        } catch (const NoConvergence& e) {
            throw NoConvergence(std::string(e.what()) + " (hat slice " + std::to_string(k) + ")",
                                k);
        }
    }
    out.U = ifftq(out.Uhat);
    out.H = ifftq(out.Hhat);
    return out;
}

QtSvd qt_svd(const QTensor& a) {
    const QTensor ah = fftq(a);
    QtSvd out;
    QTensor uh(a.n1, a.n1, a.n3), sh(a.n1, a.n2, a.n3), vh(a.n2, a.n2, a.n3);
    out.shat.resize(a.n3);
    for (int k = 0; k < a.n3; ++k) {
        try {
            MSvd sv = msvd(ah.slice(k));
            uh.set_slice(k, sv.U);
            vh.set_slice(k, sv.V);
            for (size_t t = 0; t < sv.S.size(); ++t)
                sh.d.at(static_cast<int>(t), static_cast<int>(t), k) = sv.S[t];
            out.shat[k] = std::move(sv.S);
        } catch (const NoConvergence& e) {
            throw NoConvergence(std::string(e.what()) + " (hat slice " + std::to_string(k) + ")",
                                k);
        }
    }
    out.U = ifftq(uh);
    out.S = ifftq(sh);
    out.V = ifftq(vh);
    return out;
}

QtPlu qt_plu(const QTensor& a) {
    if (a.n1 != a.n2) throw ShapeMismatch("qt_plu: tensor slices not square");
    const QTensor ah = fftq(a);
    QtPlu out;
    out.Phat = QTensor(a.n1, a.n1, a.n3);
    QTensor lh(a.n1, a.n1, a.n3), uh(a.n1, a.n1, a.n3);
    for (int k = 0; k < a.n3; ++k) {
        try {
            MPlu f = mplu(ah.slice(k));
            out.Phat.set_slice(k, perm_matrix(f.perm));
            lh.set_slice(k, f.L);
            uh.set_slice(k, f.U);
        } catch (const Singular& e) {
            throw Singular(std::string(e.what()) + " (hat slice " + std::to_string(k) + ")", k);
        }
    }
    out.P = ifftq(out.Phat);
    out.L = ifftq(lh);
    out.U = ifftq(uh);
    return out;
}

QtLu qt_lu(const QTensor& a) {
    if (a.n1 != a.n2) throw ShapeMismatch("qt_lu: tensor slices not square");
    const QTensor ah = fftq(a);
    QTensor lh(a.n1, a.n1, a.n3), uh(a.n1, a.n1, a.n3);
    for (int k = 0; k < a.n3; ++k) {
        try {
            QMatrix l, u;
            mlu(ah.slice(k), l, u);
            lh.set_slice(k, l);
            uh.set_slice(k, u);
        } catch (const ZeroPivot& e) {
            throw ZeroPivot(std::string(e.what()) + " (hat slice " + std::to_string(k) + ")", k,
                            e.step);
        }
    }
    QtLu out;
    out.L = ifftq(lh);
    out.U = ifftq(uh);
    return out;
}

}  // namespace qtz
