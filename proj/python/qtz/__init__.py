"""Quaternion z-block circulant tensor algebra.

Quaternion tensors are numpy float64 arrays of shape (n1, n2, n3, 4) holding
(w, x, y, z) components; frame stacks are uint8 arrays of shape (n, h, w, 3).
"""

from ._core import (
    angles_from_unitary,
    bcircz,
    bcircz_inv,
    consistency_metrics,
    fftq,
    fro_norm,
    identity_tensor,
    ifftq,
    ibcircz,
    qt_lu,
    qt_plu,
    qt_polar,
    qt_product,
    qt_svd,
    read_tensor,
    rotate_frames,
    schedule,
    synthesize_unitary,
    tensor_ct,
    tikhonov,
    write_tensor,
)

__all__ = [
    "angles_from_unitary",
    "bcircz",
    "bcircz_inv",
    "consistency_metrics",
    "fftq",
    "fro_norm",
    "identity_tensor",
    "ifftq",
    "ibcircz",
    "qt_lu",
    "qt_plu",
    "qt_polar",
    "qt_product",
    "qt_svd",
    "read_tensor",
    "rotate_frames",
    "schedule",
    "synthesize_unitary",
    "tensor_ct",
    "tikhonov",
    "write_tensor",
]
