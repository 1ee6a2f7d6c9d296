"""Complex linear-algebra primitives used by the channel estimators.

All functions are pure and operate on numpy complex128 arrays. Anything that
exposes ``__array__`` (ChannelVector, PilotSequence, Precoder) is accepted
wherever a vector is expected.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.errors import DimensionMismatch, NonFiniteInput, ZeroVector


@dataclass(frozen=True)
class ToleranceConfig:
    """Threshold for treating singular values and norms as zero.

    rel_rank_tol is relative to the largest singular value or vector scale.
    """

    rel_rank_tol: float = 1e-12

    def __post_init__(self):
        if not np.isfinite(self.rel_rank_tol) or self.rel_rank_tol < 0:
            raise ValueError(
                f"rel_rank_tol must be a finite nonnegative number, got {self.rel_rank_tol}"
            )


DEFAULT_TOLERANCE = ToleranceConfig()


def as_cvector(x, length: Optional[int] = None, name: str = "vector") -> np.ndarray:
    """Coerce x to a finite 1-D complex128 array, optionally of a given length."""
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1:
        v = v.reshape(-1)
    if v.size == 0:
        raise DimensionMismatch(f"{name} is empty")
    if length is not None and v.size != length:
        raise DimensionMismatch(
            f"{name} has the wrong length", details={"expected": length, "got": v.size}
        )
    if not np.all(np.isfinite(v)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return v


def as_cmatrix(
    x,
    rows: Optional[int] = None,
    cols: Optional[int] = None,
    name: str = "matrix",
) -> np.ndarray:
    """Coerce x to a finite 2-D complex128 array (a CMatrix)."""
    m = np.asarray(x, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0:
        raise DimensionMismatch(f"{name} must be a nonempty 2-D array", details={"shape": m.shape})
    if (rows is not None and m.shape[0] != rows) or (cols is not None and m.shape[1] != cols):
        raise DimensionMismatch(
            f"{name} has the wrong shape",
            details={"expected": (rows, cols), "got": m.shape},
        )
    if not np.all(np.isfinite(m)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return m


def _require_nonzero(
    v: np.ndarray, tol: ToleranceConfig, name: str, reference: Optional[float] = None
) -> float:
    """Return ||v||_2, raising ZeroVector when v cannot be normalised.

    Without a reference scale only an exact zero or a norm whose square
    under- or overflows is rejected. With one, ||v|| <= rel_rank_tol * reference
    is rejected as well.
    """
    norm = float(np.linalg.norm(v))
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        inverse_sq = np.float64(1.0) / np.float64(norm) ** 2
    if norm == 0.0 or not np.isfinite(inverse_sq):
        raise ZeroVector(f"{name} is numerically zero", details={"norm": norm})
    if reference is not None and norm <= tol.rel_rank_tol * reference:
        raise ZeroVector(
            f"{name} is negligible at the reference scale",
            details={"norm": norm, "reference": reference},
        )
    return norm


def pinv_row(
    s, tol: ToleranceConfig = DEFAULT_TOLERANCE, reference: Optional[float] = None
) -> np.ndarray:
    """Moore-Penrose pseudoinverse of the row s^T, returned as a length-T vector.

    (s^T)^+ = s^* / ||s||_2^2, so that s^T @ pinv_row(s) == 1.

    Raises:
        ZeroVector: If s is numerically zero (degenerate pilot), or negligible
            against reference when one is given.
    """
    s = as_cvector(s, name="pilot")
    norm = _require_nonzero(s, tol, "pilot", reference)
    return s.conj() / norm**2


def orth_projector(
    a, tol: ToleranceConfig = DEFAULT_TOLERANCE, reference: Optional[float] = None
) -> np.ndarray:
    """Orthogonal projector onto span(a)^perp: P = I - a a^H / ||a||_2^2.

    Raises:
        ZeroVector: If a is numerically zero, or negligible against reference.
    """
    a = as_cvector(a, name="projector axis")
    norm = _require_nonzero(a, tol, "projector axis", reference)
    return np.eye(a.size, dtype=np.complex128) - np.outer(a, a.conj()) / norm**2


def fix_phase(u: np.ndarray, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> np.ndarray:
    """Rotate u so that its first significant component is real and positive."""
    magnitudes = np.abs(u)
    peak = magnitudes.max()
    if peak == 0.0:
        return u
    k = int(np.argmax(magnitudes > tol.rel_rank_tol * peak))
    return u * (np.conj(u[k]) / magnitudes[k])


def top_left_singular_vector(
    m, tol: ToleranceConfig = DEFAULT_TOLERANCE
) -> Tuple[np.ndarray, float]:
    """Dominant left singular vector and largest singular value of a B x T matrix.

    The SVD runs on m directly. The phase of u is fixed by fix_phase; u u^H does
    not depend on it. A zero matrix returns (e_1, 0.0).
    """
    m = as_cmatrix(m, name="residual")
    if not np.any(m):
        u = np.zeros(m.shape[0], dtype=np.complex128)
        u[0] = 1.0
        return u, 0.0
    left, sigma, _ = np.linalg.svd(m, full_matrices=False)
    u = left[:, 0]
    u = fix_phase(u / np.linalg.norm(u), tol)
    return u, float(sigma[0])
