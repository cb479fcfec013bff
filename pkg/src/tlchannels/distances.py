"""Isometry gaps, the closed-form projection defect, Bures upper bounds,
Choi-based diamond lower bounds, and convergence-order fitting.

For each admissible triple the distance between the Temperley-Lieb
isometry alpha and its flat approximant gamma decomposes along

    ||alpha - gamma||  <=  |sqrt([k+1]_q N^r / theta) - 1|
                           + sqrt(1 - theta / ([k+1]_q N^r)),

where the square root term (the projection defect) measures how far the
cup-inserted embedding sticks out of range(p_l (x) p_m).  The defect has
an exact rational square, so it can be cross-checked against the numeric
operator norm.

Channel distances are bracketed rather than solved for: the constructed
Stinespring pair gives an upper bound on the Bures distance, and the
trace norm of the Choi difference against the normalized maximally
entangled input gives a lower bound on the diamond norm.  Together they
exhibit the sandwich  diamond/2 <= Bures <= gap  at every grid point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .channels import ChannelRec, alpha_isometry, choi_factor, gamma_isometry
from .jones_wenzl import jw_projector
from .qarith import AdmissibleTriple, check_admissible, qdim, theta
from .tensorkit import apply_kron_left, op_norm

__all__ = [
    "FitResult",
    "GapReport",
    "bures_upper",
    "convergence_fit",
    "diamond_lower",
    "isometry_gap",
    "projection_defect",
    "projection_defect_numeric",
    "projection_defect_squared",
    "stinespring_matrix",
    "tensor_gap_check",
]

GAP_SLACK = 1e-10


@dataclass(frozen=True)
class GapReport:
    """Gap between the two isometries of a triple and its analytic pieces."""

    N: int
    triple: AdmissibleTriple
    gap: float
    defect: float
    coeff_dev: float

    @property
    def triangle_bound(self) -> float:
        return self.coeff_dev + self.defect

    def __post_init__(self) -> None:
        if not 0.0 <= self.defect <= 1.0:
            raise ArithmeticError(f"defect {self.defect} outside [0, 1]")
        if not -GAP_SLACK <= self.gap <= self.triangle_bound + GAP_SLACK:
            raise ArithmeticError(
                f"gap {self.gap} violates triangle bound {self.triangle_bound}"
            )


def _as_triple(triple) -> AdmissibleTriple:
    if isinstance(triple, AdmissibleTriple):
        return triple
    return check_admissible(*triple)


def projection_defect_squared(N: int, triple) -> Fraction:
    """Exact rational value of 1 - theta / ([k+1]_q N^r); lies in [0, 1]."""
    t = _as_triple(triple)
    ratio = theta(N, t.l, t.m, t.k) / (qdim(N, t.k + 1) * Fraction(N) ** t.r)
    val = 1 - ratio
    if val < 0:
        raise ArithmeticError(
            f"negative defect radicand {val} for ({t.l},{t.m},{t.k}) at N={N}; "
            "theta exceeds its normalization bound"
        )
    return val


def projection_defect(N: int, triple) -> float:
    """Closed-form norm of (1 - p_l (x) p_m) applied to the flat isometry."""
    return math.sqrt(float(projection_defect_squared(N, triple)))


def projection_defect_numeric(N: int, triple) -> float:
    """The same defect measured as op_norm(gamma - (p_l (x) p_m) gamma)."""
    t = _as_triple(triple)
    gamma = gamma_isometry(N, t).matrix
    p_l = jw_projector(N, t.l).entries if t.l else None
    p_m = jw_projector(N, t.m).entries if t.m else None
    return op_norm(gamma - apply_kron_left([p_l, p_m], gamma))


def isometry_gap(N: int, triple) -> GapReport:
    """Measured ||alpha - gamma|| with its closed-form companions."""
    t = _as_triple(triple)
    gap = op_norm(alpha_isometry(N, t).matrix - gamma_isometry(N, t).matrix)
    ratio = Fraction(qdim(N, t.k + 1)) * Fraction(N) ** t.r / theta(N, t.l, t.m, t.k)
    coeff_dev = abs(math.sqrt(float(ratio)) - 1.0)
    return GapReport(N=N, triple=t, gap=gap, defect=projection_defect(N, t), coeff_dev=coeff_dev)


def stinespring_matrix(ch: ChannelRec) -> np.ndarray:
    """Stinespring matrix of the channel map with rows ordered (kept, traced).

    For an environment-traced channel this is the stored isometry itself;
    for a complement the two row blocks are swapped so that the traced
    block always plays the environment role.
    """
    iso = ch.isometry
    if ch.traced_side == "environment":
        return iso.matrix
    v3 = iso.matrix.reshape(iso.out_dim, iso.env_dim, iso.in_dim)
    return np.ascontiguousarray(v3.transpose(1, 0, 2).reshape(iso.out_dim * iso.env_dim, iso.in_dim))


def _pad_environment(v: np.ndarray, out_dim: int, env_dim: int, env_target: int) -> np.ndarray:
    if env_dim == env_target:
        return v
    padded = np.zeros((out_dim, env_target, v.shape[1]))
    padded[:, :env_dim, :] = v.reshape(out_dim, env_dim, v.shape[1])
    return padded.reshape(out_dim * env_target, v.shape[1])


def bures_upper(chA: ChannelRec, chB: ChannelRec) -> float:
    """||V_A - V_B|| for the canonical constructed Stinespring pair.

    An upper bound on the Bures distance (the infimum over all common
    dilations); the smaller environment is padded with zero blocks, which
    leaves the value unchanged.
    """
    if chA.in_dim != chB.in_dim or chA.out_dim != chB.out_dim:
        raise ValueError(
            f"channels must share input and output dimensions, got "
            f"{chA.in_dim}->{chA.out_dim} vs {chB.in_dim}->{chB.out_dim}"
        )
    env = max(chA.traced_dim, chB.traced_dim)
    va = _pad_environment(stinespring_matrix(chA), chA.out_dim, chA.traced_dim, env)
    vb = _pad_environment(stinespring_matrix(chB), chB.out_dim, chB.traced_dim, env)
    return op_norm(va - vb)


def diamond_lower(chA: ChannelRec, chB: ChannelRec) -> float:
    """Trace-norm of (id (x) (A - B)) on the normalized maximally entangled
    input; a lower bound on the diamond-norm distance.

    Evaluated through the Choi factorizations Choi = M M^T.  Writing
    U = M_A - M_B and W = M_A + M_B (columns zero-padded to a common
    count), the Choi difference is (U W^T + W U^T) / 2, whose nonzero
    spectrum survives compression onto an orthonormal basis of the columns
    of [U, W].  Only Gram-sized symmetric matrices are ever formed, and
    coinciding channels give an exact zero instead of square-rooted
    round-off.
    """
    if chA.in_dim != chB.in_dim or chA.out_dim != chB.out_dim:
        raise ValueError("channels must share input and output dimensions")
    ma, mb = choi_factor(chA), choi_factor(chB)
    cols = max(ma.shape[1], mb.shape[1])
    if ma.shape[1] < cols:
        ma = np.hstack([ma, np.zeros((ma.shape[0], cols - ma.shape[1]))])
    if mb.shape[1] < cols:
        mb = np.hstack([mb, np.zeros((mb.shape[0], cols - mb.shape[1]))])
    u, w = ma - mb, ma + mb
    basis, _ = np.linalg.qr(np.hstack([u, w]))
    s, t = basis.T @ u, basis.T @ w
    core = (s @ t.T + t @ s.T) / 2
    spectrum = np.linalg.eigvalsh((core + core.T) / 2)
    return float(np.abs(spectrum).sum()) / chA.in_dim


def tensor_gap_check(N: int, triple, d_aux: int, aux_isometry: np.ndarray | None = None) -> float:
    """op_norm((alpha - gamma) (x) V') for an auxiliary isometry V'.

    Operator norms are multiplicative under tensoring with an isometry, so
    the value must coincide with the plain gap; a discrepancy beyond 1e-10
    raises.  Defaults to V' = Id on d_aux.
    """
    t = _as_triple(triple)
    if aux_isometry is None:
        aux_isometry = np.eye(d_aux)
    aux = np.asarray(aux_isometry, dtype=float)
    if aux.shape[1] != d_aux:
        raise ValueError(f"auxiliary isometry must have {d_aux} columns, got {aux.shape}")
    if np.abs(aux.T @ aux - np.eye(d_aux)).max() > 1e-10:
        raise ValueError("auxiliary matrix is not an isometry")
    diff = alpha_isometry(N, t).matrix - gamma_isometry(N, t).matrix
    tensored = op_norm(np.kron(diff, aux))
    plain = isometry_gap(N, t).gap
    if abs(tensored - plain) > 1e-10:
        raise ArithmeticError(
            f"tensored gap {tensored} deviates from plain gap {plain} beyond 1e-10"
        )
    return tensored


class FitResult(NamedTuple):
    slope: float
    intercept: float
    residual: float


def convergence_fit(points: Sequence[tuple[float, float]]) -> FitResult:
    """Least-squares slope of log(value) against log(N).

    Needs at least 4 points with strictly positive values; the residual is
    the root-mean-square misfit of the regression.
    """
    if len(points) < 4:
        raise ValueError(f"need at least 4 points for a rate fit, got {len(points)}")
    ns = np.array([float(n) for n, _ in points])
    vals = np.array([float(v) for _, v in points])
    if (vals <= 0).any() or (ns <= 0).any():
        raise ValueError("convergence fit requires positive N and positive values")
    x, y = np.log(ns), np.log(vals)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return FitResult(float(slope), float(intercept), resid)
