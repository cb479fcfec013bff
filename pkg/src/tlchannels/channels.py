"""Temperley-Lieb channels on the irreducible spaces of O_N^+ and their
partial-trace approximants.

For an admissible triple (l, m, k) with r = (l+m-k)/2 there are two
Stinespring isometries H_k -> H_1^(x l) (x) H_1^(x m):

  * the flat cup insertion
        gamma = N^(-r/2) (id_(l-r) (x) T_2r (x) id_(m-r)),
    which is an exact isometry on all of H_1^(x k), and

  * the Temperley-Lieb intertwiner
        alpha = sqrt([k+1]_q / theta(N,l,m,k)) (p_l (x) p_m) (id (x) T_2r (x) id),
    whose range lies in H_l (x) H_m.

Tracing out the last m legs gives the channel; tracing out the first l
legs gives its complement.  alpha induces the Temperley-Lieb channel, and
gamma induces the approximant

    rho  |->  (id (x) Tr_(m-r legs))(rho) (x) Id / N^r.

The input is always coordinatized by the deterministic orthonormal basis
of H_k from irrep_basis, so all four channels of a triple share one input
coordinate system.  Channels carry their isometry as the primary
representation; Kraus operators and the Choi matrix are derived views.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .jones_wenzl import irrep_basis, jw_projector
from .qarith import AdmissibleTriple, check_admissible, qdim, theta
from .tensorkit import DenseOp, apply_kron_left, check_cap, cup_vector

__all__ = [
    "ChannelRec",
    "IsometryRec",
    "alpha_isometry",
    "apply_channel",
    "approx_channel_pair",
    "choi",
    "choi_factor",
    "cptp_report",
    "gamma_isometry",
    "kraus_ops",
    "tensor_with_identity",
    "tl_channel_pair",
    "validate_density",
]

ISOMETRY_TOL = 1e-9
DENSITY_TOL = 1e-9

ENV_SIDE = "environment"
OUT_SIDE = "output"


@dataclass(frozen=True, eq=False)
class IsometryRec:
    """Stinespring isometry V : input -> output block (x) environment block.

    Rows are indexed by (output legs, environment legs) in that order;
    out_dims and env_dims record the per-leg dimensions of the two blocks.
    """

    matrix: np.ndarray = field(repr=False)
    out_dims: tuple[int, ...]
    env_dims: tuple[int, ...]
    triple: AdmissibleTriple | None = None

    @property
    def in_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def out_dim(self) -> int:
        return math.prod(self.out_dims)

    @property
    def env_dim(self) -> int:
        return math.prod(self.env_dims)

    @property
    def out_legs(self) -> int:
        return len(self.out_dims)

    @property
    def env_legs(self) -> int:
        return len(self.env_dims)

    def gram_residual(self) -> float:
        V = self.matrix
        return float(np.abs(V.T @ V - np.eye(self.in_dim)).max())


def _finalize_isometry(mat: np.ndarray, out_dims, env_dims, triple, tol: float) -> IsometryRec:
    mat = np.ascontiguousarray(mat)
    mat.flags.writeable = False
    rec = IsometryRec(mat, tuple(out_dims), tuple(env_dims), triple)
    resid = rec.gram_residual()
    if resid > tol:
        raise ArithmeticError(f"isometry defect {resid:.3e} exceeds {tol:.1e} for {triple}")
    return rec


def _as_triple(triple) -> AdmissibleTriple:
    if isinstance(triple, AdmissibleTriple):
        return triple
    return check_admissible(*triple)


def _cup_inserted(N: int, triple: AdmissibleTriple, iota: np.ndarray) -> np.ndarray:
    """(id_(l-r) (x) T_2r (x) id_(m-r)) applied to the columns of iota."""
    l, m, r = triple.l, triple.m, triple.r
    d = iota.shape[1]
    check_cap(N ** (l + m), "isometry codomain")
    cup = cup_vector(N, r).vector
    x3 = iota.reshape(N ** (l - r), N ** (m - r), d)
    out = np.einsum("abd,c->acbd", x3, cup)
    return out.reshape(N ** (l + m), d)


@lru_cache(maxsize=None)
def _gamma_cached(N: int, triple: AdmissibleTriple) -> IsometryRec:
    iota = irrep_basis(N, triple.k).iota
    mat = _cup_inserted(N, triple, iota) / N ** (triple.r / 2)
    return _finalize_isometry(mat, (N,) * triple.l, (N,) * triple.m, triple, 1e-12)


def gamma_isometry(N: int, triple, basis: np.ndarray | None = None) -> IsometryRec:
    """Flat cup-insertion isometry H_k -> H_1^(x l) (x) H_1^(x m).

    Exact up to round-off: the cup contributes norm N^(r/2), which the
    prefactor removes.  An alternative orthonormal basis of H_k may be
    supplied to re-coordinatize the input.
    """
    triple = _as_triple(triple)
    if basis is None:
        return _gamma_cached(N, triple)
    mat = _cup_inserted(N, triple, np.asarray(basis, dtype=float)) / N ** (triple.r / 2)
    return _finalize_isometry(mat, (N,) * triple.l, (N,) * triple.m, triple, 1e-12)


@lru_cache(maxsize=None)
def _alpha_cached(N: int, triple: AdmissibleTriple) -> IsometryRec:
    return _alpha_build(N, triple, irrep_basis(N, triple.k).iota)


def _alpha_build(N: int, triple: AdmissibleTriple, iota: np.ndarray) -> IsometryRec:
    l, m, k = triple.l, triple.m, triple.k
    raw = _cup_inserted(N, triple, iota)
    p_l = jw_projector(N, l).entries if l else None
    p_m = jw_projector(N, m).entries if m else None
    projected = apply_kron_left([p_l, p_m], raw)
    coeff = math.sqrt(float(Fraction(qdim(N, k + 1)) / theta(N, l, m, k)))
    return _finalize_isometry(
        coeff * projected, (N,) * l, (N,) * m, triple, ISOMETRY_TOL
    )


def alpha_isometry(N: int, triple, basis: np.ndarray | None = None) -> IsometryRec:
    """Temperley-Lieb intertwiner isometry H_k -> H_l (x) H_m.

    Built as sqrt([k+1]_q / theta) (p_l (x) p_m) applied to the cup-inserted
    embedding; the projectors are applied factor-by-factor, never as one
    materialized Kronecker product.  The range lies in range(p_l (x) p_m).
    """
    triple = _as_triple(triple)
    if basis is None:
        return _alpha_cached(N, triple)
    return _alpha_build(N, triple, np.asarray(basis, dtype=float))


@dataclass(frozen=True, eq=False)
class ChannelRec:
    """A channel as (Stinespring isometry, which block gets traced out).

    Tracing the environment block gives the channel itself; tracing the
    output block gives the complementary channel.
    """

    isometry: IsometryRec
    traced_side: str

    def __post_init__(self) -> None:
        if self.traced_side not in (ENV_SIDE, OUT_SIDE):
            raise ValueError(f"traced_side must be {ENV_SIDE!r} or {OUT_SIDE!r}")

    @property
    def in_dim(self) -> int:
        return self.isometry.in_dim

    @property
    def kept_dims(self) -> tuple[int, ...]:
        iso = self.isometry
        return iso.out_dims if self.traced_side == ENV_SIDE else iso.env_dims

    @property
    def traced_dims(self) -> tuple[int, ...]:
        iso = self.isometry
        return iso.env_dims if self.traced_side == ENV_SIDE else iso.out_dims

    @property
    def out_dim(self) -> int:
        return math.prod(self.kept_dims)

    @property
    def traced_dim(self) -> int:
        return math.prod(self.traced_dims)

    def complement(self) -> "ChannelRec":
        other = OUT_SIDE if self.traced_side == ENV_SIDE else ENV_SIDE
        return ChannelRec(self.isometry, other)


def tl_channel_pair(N: int, triple) -> tuple[ChannelRec, ChannelRec]:
    """The Temperley-Lieb channel of a triple and its complement."""
    iso = alpha_isometry(N, triple)
    return ChannelRec(iso, ENV_SIDE), ChannelRec(iso, OUT_SIDE)


def approx_channel_pair(N: int, triple) -> tuple[ChannelRec, ChannelRec]:
    """The partial-trace approximant channel of a triple and its complement."""
    iso = gamma_isometry(N, triple)
    return ChannelRec(iso, ENV_SIDE), ChannelRec(iso, OUT_SIDE)


def validate_density(rho: np.ndarray, dim: int, tol: float = DENSITY_TOL) -> np.ndarray:
    """Symmetrize and validate a density matrix; returns the symmetrized copy."""
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (dim, dim):
        raise ValueError(f"density matrix has shape {rho.shape}, expected ({dim}, {dim})")
    rho = (rho + rho.T) / 2
    tr = float(np.trace(rho))
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace {tr} deviates from 1 beyond {tol:.1e}")
    lo = float(np.linalg.eigvalsh(rho)[0])
    if lo < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def apply_channel(ch: ChannelRec, rho: np.ndarray, validate: bool = True) -> np.ndarray:
    """Apply the channel to a density matrix on its input space.

    With validate=False the positive-semidefiniteness check of the input
    is skipped (for inputs valid by construction); shape and trace are
    always enforced.
    """
    iso = ch.isometry
    if validate:
        rho = validate_density(rho, iso.in_dim)
    else:
        rho = np.asarray(rho, dtype=float)
        if rho.shape != (iso.in_dim, iso.in_dim):
            raise ValueError(f"density matrix has shape {rho.shape}, expected square dim {iso.in_dim}")
        rho = (rho + rho.T) / 2
        if abs(float(np.trace(rho)) - 1.0) > 1e-8:
            raise ValueError("density matrix trace deviates from 1")
    v3 = iso.matrix.reshape(iso.out_dim, iso.env_dim, iso.in_dim)
    if ch.traced_side == ENV_SIDE:
        out = np.einsum("aed,dc,bec->ab", v3, rho, v3, optimize=True)
    else:
        out = np.einsum("aed,dc,afc->ef", v3, rho, v3, optimize=True)
    return (out + out.T) / 2


def kraus_ops(ch: ChannelRec) -> list[np.ndarray]:
    """Kraus operators obtained by slicing the isometry along the traced block."""
    iso = ch.isometry
    v3 = iso.matrix.reshape(iso.out_dim, iso.env_dim, iso.in_dim)
    if ch.traced_side == ENV_SIDE:
        return [np.ascontiguousarray(v3[:, e, :]) for e in range(iso.env_dim)]
    return [np.ascontiguousarray(v3[a, :, :]) for a in range(iso.out_dim)]


def choi_factor(ch: ChannelRec) -> np.ndarray:
    """Matrix M with Choi = M M^T; columns indexed by the traced block.

    M has shape (in_dim * out_dim) x traced_dim, rows indexed by
    (input leg, kept output legs).
    """
    iso = ch.isometry
    v3 = iso.matrix.reshape(iso.out_dim, iso.env_dim, iso.in_dim)
    if ch.traced_side == ENV_SIDE:
        m = v3.transpose(2, 0, 1)  # (in, out, env)
    else:
        m = v3.transpose(2, 1, 0)  # (in, env=kept, out=traced)
    return np.ascontiguousarray(m.reshape(iso.in_dim * ch.out_dim, ch.traced_dim))


def choi(ch: ChannelRec) -> DenseOp:
    """Choi matrix sum_ij |i><j| (x) Channel(|i><j|) on input (x) output.

    Legs are (input, kept output legs); the partial trace over the output
    legs is the identity on the input and the total trace equals in_dim.
    """
    m = choi_factor(ch)
    check_cap(m.shape[0], "Choi matrix side")
    legs = (ch.in_dim,) + ch.kept_dims
    return DenseOp(m @ m.T, legs, legs)


def cptp_report(ch: ChannelRec) -> dict[str, float]:
    """Residuals certifying complete positivity and trace preservation.

    choi_min_eig is the smallest eigenvalue of the Choi matrix (computed
    through the factor Gram matrix, padding with the exact zeros of any
    rank deficiency); trace_residual measures partial-trace(Choi) = Id.
    """
    m = choi_factor(ch)
    gram = m.T @ m
    eigs = np.linalg.eigvalsh((gram + gram.T) / 2)
    min_eig = float(eigs[0])
    if m.shape[1] < m.shape[0]:
        min_eig = min(min_eig, 0.0)
    V = ch.isometry.matrix
    trace_residual = float(np.abs(V.T @ V - np.eye(ch.in_dim)).max())
    choi_trace = float(np.trace(gram))
    return {
        "choi_min_eig": min_eig,
        "trace_residual": trace_residual,
        "choi_trace_error": abs(choi_trace - ch.in_dim),
    }


def tensor_with_identity(iso: IsometryRec, d_aux: int) -> IsometryRec:
    """Tensor a Stinespring isometry with the identity channel on d_aux.

    The auxiliary system becomes one extra output leg; the environment
    block is unchanged.  Input dimension becomes in_dim * d_aux.
    """
    if d_aux < 1:
        raise ValueError(f"d_aux must be >= 1, got {d_aux}")
    if d_aux == 1:
        return iso
    out, env, d = iso.out_dim, iso.env_dim, iso.in_dim
    check_cap(out * d_aux * env, "tensored isometry codomain")
    v3 = iso.matrix.reshape(out, env, d)
    v = np.einsum("oei,ax->oaeix", v3, np.eye(d_aux))
    return _finalize_isometry(
        v.reshape(out * d_aux * env, d * d_aux),
        iso.out_dims + (d_aux,),
        iso.env_dims,
        iso.triple,
        ISOMETRY_TOL,
    )
