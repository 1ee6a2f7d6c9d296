"""LS and VILLAIN channel estimation from the pilot-phase receive matrix."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.numerics import (
    DEFAULT_TOLERANCE,
    ToleranceConfig,
    as_cvector,
    fix_phase,
    orth_projector,
    pinv_row,
    top_left_singular_vector,
)
from core.pilot import PilotPhase
from utils.error_logger import ErrorLogger

error_logger = ErrorLogger(__name__)


@dataclass(eq=False)
class ChannelEstimate:
    """Channel estimate with the projector it was formed under.

    projector None is the identity marker (LS); u None means no eavesdropper
    direction was estimated. ls_norm is ||Y pinv(s^T)||_2 and sets the scale at
    which h_hat counts as zero.
    """

    h_hat: np.ndarray
    projector: Optional[np.ndarray]
    u: Optional[np.ndarray]
    residual_sigma: float
    ls_norm: float
    estimator: str
    degenerate: bool = False

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.h_hat, dtype=dtype)

    @property
    def has_projector(self) -> bool:
        return self.projector is not None


def _ls_and_residual(phase: PilotPhase, tol: ToleranceConfig):
    """Return (Y pinv(s^T), Y (I_T - pinv(s^T) s^T))."""
    s = as_cvector(phase.pilot, length=phase.length, name="pilot")
    p = pinv_row(s, tol)
    h_ls = phase.Y @ p
    residual = phase.Y - np.outer(h_ls, s)
    return h_ls, residual


def ls_estimate(phase: PilotPhase, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> ChannelEstimate:
    """Least-squares estimate h_hat = Y (s^T)^+.

    residual_sigma is the largest singular value of the pilot-orthogonal
    residual and is only reported as a diagnostic.

    Raises:
        ZeroVector: If the pilot is numerically zero.
    """
    h_ls, residual = _ls_and_residual(phase, tol)
    _, sigma = top_left_singular_vector(residual, tol)
    return ChannelEstimate(
        h_hat=h_ls,
        projector=None,
        u=None,
        residual_sigma=sigma,
        ls_norm=float(np.linalg.norm(h_ls)),
        estimator="ls",
    )


def _passive_direction(h_ls: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    """Convention-fixed unit direction orthogonal to the LS estimate.

    Starts from the standard basis vector on which h_ls has least weight and
    removes its h_ls component. Falls back to e_1 when no such direction exists (B = 1).
    """
    size = h_ls.size
    k = int(np.argmin(np.abs(h_ls)))
    e_k = np.zeros(size, dtype=np.complex128)
    e_k[k] = 1.0
    h_norm_sq = float(np.vdot(h_ls, h_ls).real)
    direction = e_k
    if h_norm_sq > 0:
        direction = e_k - h_ls * (np.conj(h_ls[k]) / h_norm_sq)
    norm = np.linalg.norm(direction)
    if norm <= tol.rel_rank_tol:
        direction, norm = np.eye(size, dtype=np.complex128)[0], 1.0
    return fix_phase(direction / norm, tol)


def villain_estimate(phase: PilotPhase, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> ChannelEstimate:
    """VILLAIN: jointly pick a rank-(B-1) projector and a projected channel estimate.

    Minimises ||P Y - h s^T||_F^2 over the Grassmannian of (B-1)-dimensional
    subspaces and over h. The minimiser removes the dominant left singular
    direction u of the residual Y (I_T - pinv(s^T) s^T) and projects the LS
    estimate accordingly.

    A residual below rel_rank_tol * ||Y||_F carries no eavesdropper direction;
    the estimate is then flagged degenerate and u is chosen orthogonal to the
    LS estimate, which leaves the LS estimate unchanged.

    Raises:
        ZeroVector: If the pilot is numerically zero.
    """
    if phase.length == 1:
        error_logger.log_warning(
            "VILLAIN with a length-1 pilot has no residual to estimate the "
            "eavesdropper direction from; the zero-leakage guarantee needs T > 1"
        )
    h_ls, residual = _ls_and_residual(phase, tol)
    u, sigma = top_left_singular_vector(residual, tol)

    degenerate = sigma <= tol.rel_rank_tol * float(np.linalg.norm(phase.Y))
    if degenerate:
        error_logger.log_debug(
            "Residual sigma %.3e is negligible; treating the pilot phase as passive", sigma
        )
        u = _passive_direction(h_ls, tol)

    projector = orth_projector(u, tol)
    h_hat = projector @ h_ls
    return ChannelEstimate(
        h_hat=h_hat,
        projector=projector,
        u=u,
        residual_sigma=sigma,
        ls_norm=float(np.linalg.norm(h_ls)),
        estimator="villain",
        degenerate=bool(degenerate),
    )


def villain_objective(phase: PilotPhase, projector: Optional[np.ndarray], h_tilde) -> float:
    """||P Y - h s^T||_F^2, with projector None standing for the identity."""
    s = as_cvector(phase.pilot, length=phase.length, name="pilot")
    h_tilde = as_cvector(h_tilde, length=phase.num_antennas, name="channel candidate")
    projected = phase.Y if projector is None else projector @ phase.Y
    return float(np.linalg.norm(projected - np.outer(h_tilde, s)) ** 2)


ESTIMATORS = {
    "ls": ls_estimate,
    "villain": villain_estimate,
}
