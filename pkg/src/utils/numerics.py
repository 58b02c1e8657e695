"""Small numeric helpers shared across modules."""

import numpy as np
from numpy.typing import ArrayLike


def relative_error(actual: ArrayLike, reference: ArrayLike, floor: float = 1e-12) -> float:
    """Sup-norm distance of two arrays relative to the larger sup-norm."""
    a = np.asarray(actual, dtype=float)
    b = np.asarray(reference, dtype=float)
    scale = max(
        float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)), floor
    )
    return float(np.max(np.abs(a - b), initial=0.0)) / scale


def r_squared(observed: ArrayLike, fitted: ArrayLike) -> float:
    """Coefficient of determination clipped to [0, 1]."""
    y = np.asarray(observed, dtype=float)
    y_hat = np.asarray(fitted, dtype=float)
    ss_res = float(np.sum((y - y_hat) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return float(min(1.0, max(0.0, 1.0 - ss_res / ss_tot)))


def linear_fit(x: ArrayLike, y: ArrayLike) -> tuple[float, float, float]:
    """Least-squares line y = intercept + slope * x.

    Returns:
        (slope, intercept, r_squared)
    """
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    design = np.column_stack([np.ones_like(xs), xs])
    coef, _, _, _ = np.linalg.lstsq(design, ys, rcond=None)
    intercept, slope = float(coef[0]), float(coef[1])
    return slope, intercept, r_squared(ys, design @ coef)
