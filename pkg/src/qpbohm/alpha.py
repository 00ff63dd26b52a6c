"""The alpha-weighted operator product and its helpers.

``alpha_product(X, Y, a)`` returns a*XY + (1-a)*YX, the one-complex-parameter
interpolation between the two operator orderings.  a=1 gives XY, a=0 gives
YX, and a=1/2 the symmetrized (Jordan) product.  The identity suite for
this product lives in the test and verification modules, not on the hot
path.
"""

from __future__ import annotations

import cmath

import numpy as np

from .errors import DimMismatch


def as_alpha(value) -> complex:
    """Validate and coerce an interpolation parameter to a finite complex."""
    a = complex(value)
    if not (cmath.isfinite(a)):
        raise ValueError(f"alpha must be finite, got {a}")
    return a


def parse_alpha(text: str) -> complex:
    """Parse 'RE' or 'RE,IM' into a complex alpha (imaginary part defaults to 0)."""
    parts = text.split(",")
    if len(parts) == 1:
        return as_alpha(float(parts[0]))
    if len(parts) == 2:
        return as_alpha(complex(float(parts[0]), float(parts[1])))
    raise ValueError(f"cannot parse alpha from {text!r}; expected RE or RE,IM")


def _check_square_pair(X: np.ndarray, Y: np.ndarray) -> None:
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"X must be square, got shape {X.shape}")
    if Y.shape != X.shape:
        raise DimMismatch(f"shapes differ: {X.shape} vs {Y.shape}")


def alpha_product(X: np.ndarray, Y: np.ndarray, alpha) -> np.ndarray:
    """a*X@Y + (1-a)*Y@X for same-sized square complex matrices."""
    a = as_alpha(alpha)
    _check_square_pair(X, Y)
    return a * (X @ Y) + (1.0 - a) * (Y @ X)


def alpha_commut_defect(X: np.ndarray, Y: np.ndarray, alpha) -> np.ndarray:
    """The ordering defect alpha_product(X,Y,a) - alpha_product(Y,X,a).

    Equals (2a-1)(XY - YX); callers assert that identity where needed.
    """
    a = as_alpha(alpha)
    _check_square_pair(X, Y)
    return alpha_product(X, Y, a) - alpha_product(Y, X, a)
