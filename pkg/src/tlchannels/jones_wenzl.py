"""Jones-Wenzl projectors and orthonormal bases for the irreducible spaces.

H_n sits inside H_1^(x n) as the joint kernel of every adjacent cap, and
p_n is the orthogonal projection onto it.  We realize p_n by the Wenzl
recursion

    p_1     = Id,
    p_{n+1} = (p_n (x) Id) - ([n]_q/[n+1]_q) (p_n (x) Id) E_n (p_n (x) Id),

where E_n = Id^(x n-1) (x) T_2 T_2^T is the unnormalized cup-cap on the
last two legs.  Since E_n has rank N^(n-1), the correction term is the
outer product W W^T with W = (p_n (x) Id)(Id^(x n-1) (x) T_2), which keeps
the recursion at matmul cost on tall-thin matrices.

An orthonormal basis of H_n (the embedding isometry iota with
iota iota^T = p_n) is extracted by column-pivoted QR of p_n, which picks
the column of largest remaining norm at every step (ties resolved by
lowest column index inside LAPACK), so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .qarith import qdim
from .tensorkit import DenseOp, check_cap

__all__ = [
    "IrrepBasis",
    "JWProjector",
    "MembershipResult",
    "adjacent_cup_image",
    "in_irrep",
    "irrep_basis",
    "jw_projector",
]

IDEMPOTENCY_TOL = 1e-9
TRACE_TOL = 1e-6
MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class JWProjector:
    """Orthogonal projection of H_1^(x n) onto H_n, with its leg structure."""

    N: int
    n: int
    matrix: DenseOp = field(repr=False)

    @property
    def entries(self) -> np.ndarray:
        return self.matrix.entries

    @property
    def rank(self) -> int:
        return qdim(self.N, self.n + 1)


@dataclass(frozen=True, eq=False)
class IrrepBasis:
    """Embedding isometry iota : H_n -> H_1^(x n), columns orthonormal."""

    N: int
    n: int
    iota: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.iota.shape[1]


class MembershipResult(NamedTuple):
    member: bool
    residual: float


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=None)
def jw_projector(N: int, n: int) -> JWProjector:
    """Jones-Wenzl projector p_n on H_1^(x n) via the Wenzl recursion.

    The result is symmetric, idempotent within 1e-9, has trace [n+1]_q,
    and annihilates the cup T_2 inserted at any adjacent leg pair.
    Results are cached per (N, n) with read-only entries.
    """
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    check_cap(N**n, "Jones-Wenzl projector side")
    if n == 0:
        mat = np.ones((1, 1))
        return JWProjector(N, 0, DenseOp(_freeze(mat), (), ()))
    if n == 1:
        mat = np.eye(N)
        return JWProjector(N, 1, DenseOp(_freeze(mat), (N,), (N,)))

    prev = jw_projector(N, n - 1).entries
    A = np.kron(prev, np.eye(N))
    # W = A (Id^(x n-2) (x) T_2): sum the last two legs over the cup diagonal
    A4 = A.reshape(N**n, N ** (n - 2), N, N)
    W = np.einsum("xjii->xj", A4)
    coeff = qdim(N, n - 1) / qdim(N, n)
    mat = A - coeff * (W @ W.T)
    mat = (mat + mat.T) / 2
    return JWProjector(N, n, DenseOp(_freeze(mat), (N,) * n, (N,) * n))


@lru_cache(maxsize=None)
def irrep_basis(N: int, n: int) -> IrrepBasis:
    """Deterministic orthonormal basis of H_n inside H_1^(x n).

    Columns are the leading rank(p_n) columns of the column-pivoted QR
    factor of p_n; iota^T iota = Id and iota iota^T = p_n within 1e-9.
    """
    proj = jw_projector(N, n)
    d = proj.rank
    if n == 0:
        return IrrepBasis(N, 0, _freeze(np.ones((1, 1))))
    Q, _, _ = scipy.linalg.qr(proj.entries, pivoting=True)
    iota = np.ascontiguousarray(Q[:, :d])
    # QR of a projector can flip overall column signs; that is fine, but the
    # span must reproduce p_n to working precision
    resid = float(np.abs(iota @ iota.T - proj.entries).max())
    if resid > IDEMPOTENCY_TOL:
        raise ArithmeticError(
            f"orthonormalization of p_{n} at N={N} failed: residual {resid:.3e}"
        )
    return IrrepBasis(N, n, _freeze(iota))


def in_irrep(v: np.ndarray, N: int, n: int) -> MembershipResult:
    """Whether v in H_1^(x n) lies in H_n, with the relative residual.

    True iff ||p_n v - v|| <= 1e-8 ||v||; rejects the zero vector.
    """
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape[0] != N**n:
        raise ValueError(f"vector has dimension {v.shape[0]}, expected {N**n}")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("zero vector has no well-defined membership")
    resid = float(np.linalg.norm(jw_projector(N, n).entries @ v - v)) / norm
    return MembershipResult(resid <= MEMBERSHIP_TOL, resid)


def adjacent_cup_image(N: int, n: int, j: int) -> np.ndarray:
    """p_n (Id^(x j) (x) T_2 (x) Id^(x n-j-2)) as an N^n x N^(n-2) matrix.

    Vanishes identically for every 0 <= j <= n-2; used to certify the cup
    annihilation property of the projectors.
    """
    if not 0 <= j <= n - 2:
        raise ValueError(f"cup position {j} out of range for {n} legs")
    p = jw_projector(N, n).entries
    p5 = p.reshape(N**n, N**j, N, N, N ** (n - j - 2))
    out = np.einsum("xaiib->xab", p5)
    return out.reshape(N**n, N ** (n - 2))
