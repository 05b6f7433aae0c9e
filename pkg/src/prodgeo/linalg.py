"""Determinants of small dense matrices."""

from __future__ import annotations

import numpy as np

__all__ = ["det_pivoted"]


def det_pivoted(a: np.ndarray) -> float:
    """Determinant by Gaussian elimination with partial pivoting.

    Sized for the matrices that occur here: Hessians and bordered
    Hessians of at most a dozen rows.  1x1 and 2x2 cases use the direct
    formula, which is exact for the rank checks built on 2x2 minors.
    """
    a = np.array(a, dtype=float)
    m, mm = a.shape
    if m != mm:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if m == 1:
        return float(a[0, 0])
    if m == 2:
        return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    det = 1.0
    for col in range(m):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if a[piv, col] == 0.0:
            return 0.0
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            det = -det
        det *= a[col, col]
        for row in range(col + 1, m):
            factor = a[row, col] / a[col, col]
            a[row, col:] -= factor * a[col, col:]
    return float(det)
