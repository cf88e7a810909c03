#pragma once

#include "qtz/qtensor.hpp"

namespace qtz {

// All four decompositions share the template: fftq, factor every hat slice
// with the matching matrix kernel, ifftq the factors. Error indices (slice,
// step) are 0-based.

enum class PolarSide { right, left };

struct QtPolar {
    QTensor U;  // unitary; right: A = U *q H, left: A = H *q U
    QTensor H;  // tensor-Hermitian, hat slices PSD
    QTensor Uhat, Hhat;
};

QtPolar qt_polar(const QTensor& a, PolarSide side = PolarSide::right);

struct QtSvd {
    QTensor U;  // n1 x n1 x n3 unitary
    QTensor S;  // n1 x n2 x n3 f-diagonal
    QTensor V;  // n2 x n2 x n3 unitary
    std::vector<std::vector<double>> shat;  // per hat slice, descending
};

QtSvd qt_svd(const QTensor& a);

struct QtPlu {
    QTensor P;     // ifftq of Phat
    QTensor Phat;  // f-permutation, 0/1 real slices
    QTensor L;     // unit f-lower-triangular
    QTensor U;     // f-upper-triangular
};

QtPlu qt_plu(const QTensor& a);

struct QtLu {
    QTensor L;
    QTensor U;
};

QtLu qt_lu(const QTensor& a);

}  // namespace qtz
