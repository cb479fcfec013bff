"""Dense real linear algebra with tensor-leg bookkeeping.

Operators on tensor products H_1 (x) ... (x) H_p are stored as plain 2-d
float64 arrays together with the list of factor dimensions of each side
(the "legs").  That is enough to do Kronecker products, partial traces
over arbitrary leg subsets, and structured application of a Kronecker
product of square factors to a tall matrix without ever materializing
the product.

All scalars are real: every operator built in this package (cup vectors,
Jones-Wenzl projectors, the Temperley-Lieb isometries) has real entries
in the standard product basis.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CupVector",
    "DenseOp",
    "DimensionCapError",
    "apply_kron_left",
    "cup_vector",
    "eigh",
    "get_dim_cap",
    "kron",
    "op_norm",
    "partial_trace",
    "partial_trace_raw",
    "set_dim_cap",
    "trace_norm",
]

#: Largest admitted Hilbert-space dimension per matrix side.  Configurable
#: through set_dim_cap() or the TLCHANNELS_CAP environment variable.
DEFAULT_DIM_CAP = 300_000

#: Side length above which kron() refuses to materialize its result;
#: callers are expected to use apply_kron_left() instead.
KRON_MATERIALIZE_CAP = 20_000

ENV_CAP_VAR = "TLCHANNELS_CAP"

_dim_cap = int(os.environ.get(ENV_CAP_VAR, DEFAULT_DIM_CAP))


class DimensionCapError(RuntimeError):
    """Raised when a construction would exceed the configured dimension cap."""


def get_dim_cap() -> int:
    return _dim_cap


def set_dim_cap(cap: int) -> None:
    global _dim_cap
    if cap <= 0:
        raise ValueError(f"dimension cap must be positive, got {cap}")
    _dim_cap = int(cap)


def check_cap(dim: int, what: str = "operator side") -> None:
    if dim > _dim_cap:
        raise DimensionCapError(f"{what} of dimension {dim} exceeds cap {_dim_cap}")


def _prod(dims: Iterable[int]) -> int:
    return math.prod(dims)


@dataclass(frozen=True, eq=False)
class DenseOp:
    """A real matrix with an attached tensor-leg structure.

    row_legs / col_legs list the factor dimensions of the row and column
    index; their products must equal the matrix shape.
    """

    entries: np.ndarray
    row_legs: tuple[int, ...]
    col_legs: tuple[int, ...]

    def __post_init__(self) -> None:
        ent = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "row_legs", tuple(int(d) for d in self.row_legs))
        object.__setattr__(self, "col_legs", tuple(int(d) for d in self.col_legs))
        if ent.ndim != 2:
            raise ValueError(f"entries must be a matrix, got ndim={ent.ndim}")
        if _prod(self.row_legs) != ent.shape[0] or _prod(self.col_legs) != ent.shape[1]:
            raise ValueError(
                f"leg products {self.row_legs} x {self.col_legs} do not match shape {ent.shape}"
            )
        if not np.isfinite(ent).all():
            raise ValueError("entries contain non-finite values")

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def is_square_per_leg(self) -> bool:
        return self.row_legs == self.col_legs

    @staticmethod
    def from_matrix(entries: np.ndarray) -> "DenseOp":
        """Wrap a bare matrix as a single-leg-per-side operator."""
        ent = np.asarray(entries, dtype=float)
        return DenseOp(ent, (ent.shape[0],), (ent.shape[1],))


def as_dense_op(A: "DenseOp | np.ndarray") -> DenseOp:
    if isinstance(A, DenseOp):
        return A
    return DenseOp.from_matrix(np.asarray(A, dtype=float))


def kron(A: "DenseOp | np.ndarray", B: "DenseOp | np.ndarray") -> DenseOp:
    """Kronecker product; leg lists concatenate.

    Refuses to materialize a result whose side exceeds the kron cap (use
    apply_kron_left for structured application) or the global dimension cap.
    """
    A, B = as_dense_op(A), as_dense_op(B)
    rows = A.shape[0] * B.shape[0]
    cols = A.shape[1] * B.shape[1]
    check_cap(max(rows, cols), "kron result side")
    if max(rows, cols) > KRON_MATERIALIZE_CAP:
        raise DimensionCapError(
            f"refusing to materialize a {rows} x {cols} Kronecker product "
            f"(cap {KRON_MATERIALIZE_CAP}); apply factors via apply_kron_left instead"
        )
    return DenseOp(np.kron(A.entries, B.entries), A.row_legs + B.row_legs, A.col_legs + B.col_legs)


def apply_kron_left(factors: Sequence[np.ndarray], mat: np.ndarray) -> np.ndarray:
    """Compute (factors[0] (x) ... (x) factors[-1]) @ mat without the big kron.

    Each factor is a square matrix acting on one leg group of mat's rows;
    the row count of mat must equal the product of the factor dimensions.
    Identity factors may be passed as None to skip them.
    """
    mat = np.asarray(mat, dtype=float)
    dims = [1 if f is None else f.shape[0] for f in factors]
    for f in factors:
        if f is not None and f.shape[0] != f.shape[1]:
            raise ValueError("apply_kron_left factors must be square")
    if _prod(dims) != mat.shape[0]:
        raise ValueError(f"factor dims {dims} do not match row count {mat.shape[0]}")
    ncols = mat.shape[1]
    out = mat.reshape(*dims, ncols)
    for axis, f in enumerate(factors):
        if f is None:
            continue
        if f.shape[0] == 1:
            out = out * f[0, 0]
            continue
        out = np.tensordot(f, out, axes=([1], [axis]))
        # tensordot puts the contracted axis first; rotate it back into place
        order = list(range(1, axis + 1)) + [0] + list(range(axis + 1, out.ndim))
        out = out.transpose(order)
    return np.ascontiguousarray(out.reshape(mat.shape[0], ncols))


def partial_trace_raw(entries: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of a square multi-leg matrix, keeping the listed legs.

    dims are the per-leg dimensions (same for rows and columns); keep is a
    set of leg indices, returned in ascending leg order.
    """
    dims = tuple(int(d) for d in dims)
    p = len(dims)
    keep_sorted = sorted(set(int(i) for i in keep))
    if keep_sorted and not (0 <= keep_sorted[0] and keep_sorted[-1] < p):
        raise ValueError(f"keep indices {keep_sorted} out of range for {p} legs")
    ent = np.asarray(entries, dtype=float).reshape(dims + dims)
    # trace out the complement legs one at a time, from the highest index down
    traced = [i for i in range(p) if i not in keep_sorted]
    nlegs = p
    for i in sorted(traced, reverse=True):
        ent = np.trace(ent, axis1=i, axis2=i + nlegs)
        nlegs -= 1
    d_keep = _prod(dims[i] for i in keep_sorted)
    return ent.reshape(d_keep, d_keep)


def partial_trace(A: DenseOp, keep: Sequence[int]) -> DenseOp:
    """Partial trace over all legs not in keep; kept legs stay in order."""
    if not A.is_square_per_leg():
        raise ValueError(f"partial trace needs matching leg lists, got {A.row_legs} vs {A.col_legs}")
    keep_sorted = sorted(set(int(i) for i in keep))
    out = partial_trace_raw(A.entries, A.row_legs, keep_sorted)
    legs = tuple(A.row_legs[i] for i in keep_sorted)
    if not legs:
        legs = (1,)
        out = out.reshape(1, 1)
    return DenseOp(out, legs, legs)


@dataclass(frozen=True, eq=False)
class CupVector:
    """The nested cup sum_{i_1..i_r} |i_1..i_r> (x) |i_r..i_1> on 2r legs."""

    N: int
    r: int
    vector: np.ndarray = field(repr=False)

    @property
    def norm_squared(self) -> float:
        return float(self.vector @ self.vector)


def cup_vector(N: int, r: int) -> CupVector:
    """Nested cup vector in H_1^(x 2r) coordinates; squared norm N^r."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    dim = N ** (2 * r)
    check_cap(dim, "cup vector dimension")
    if r == 0:
        return CupVector(N, 0, np.ones(1))
    vec = np.zeros((N,) * (2 * r))
    for idx in np.ndindex(*(N,) * r):
        vec[idx + idx[::-1]] = 1.0
    return CupVector(N, r, vec.reshape(dim))


def _entries(A: "DenseOp | np.ndarray") -> np.ndarray:
    return A.entries if isinstance(A, DenseOp) else np.asarray(A, dtype=float)


def op_norm(A: "DenseOp | np.ndarray") -> float:
    """Largest singular value.

    Symmetric matrices go through eigvalsh; tall or wide matrices are
    reduced through the Gram matrix of their smaller side.  Both paths
    keep the relative accuracy of the top singular value near machine
    precision at a fraction of the full SVD cost.
    """
    ent = _entries(A)
    if ent.size == 0:
        return 0.0
    m, n = ent.shape
    if m == n and n > 128:
        scale = max(1.0, float(np.abs(ent).max()))
        if float(np.abs(ent - ent.T).max()) <= 1e-13 * scale:
            return float(np.abs(np.linalg.eigvalsh((ent + ent.T) / 2)).max())
    if min(m, n) <= 128 or m == n:
        s = np.linalg.svd(ent, compute_uv=False)
        return float(s[0])
    G = ent.T @ ent if n < m else ent @ ent.T
    G = (G + G.T) / 2
    top = float(np.linalg.eigvalsh(G)[-1])
    return math.sqrt(max(top, 0.0))


def trace_norm(A: "DenseOp | np.ndarray") -> float:
    """Sum of singular values."""
    ent = _entries(A)
    if ent.size == 0:
        return 0.0
    return float(np.linalg.svd(ent, compute_uv=False).sum())


SYMMETRY_TOL = 1e-10


def eigh(A: "DenseOp | np.ndarray") -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix (ascending eigenvalues).

    Rejects input whose asymmetry exceeds SYMMETRY_TOL relative to its size.
    """
    ent = _entries(A)
    if ent.shape[0] != ent.shape[1]:
        raise ValueError(f"eigh needs a square matrix, got {ent.shape}")
    scale = max(1.0, float(np.abs(ent).max(initial=0.0)))
    asym = float(np.abs(ent - ent.T).max(initial=0.0))
    if asym > SYMMETRY_TOL * scale:
        raise ValueError(f"matrix is not symmetric: max asymmetry {asym:.3e}")
    vals, vecs = np.linalg.eigh((ent + ent.T) / 2)
    return vals, vecs
