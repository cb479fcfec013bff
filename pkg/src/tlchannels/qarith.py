"""Exact arithmetic for quantum integers, quantum factorials and theta-nets.

The irreducible representations of the free orthogonal quantum group O_N^+
live on Hilbert spaces H_0, H_1, H_2, ... with dim(H_1) = N and the
Chebyshev-like recurrence

    dim(H_{n+1}) = N * dim(H_n) - dim(H_{n-1}).

Quantum integers follow the convention [0]_q = 1 and [n+1]_q = dim(H_n),
so [1]_q = 1, [2]_q = N, [3]_q = N^2 - 1, and so on.  Everything here is
computed over the integers (or exact rationals); q itself, the root of
q + 1/q = N, is never materialized as a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

__all__ = [
    "AdmissibleTriple",
    "admissible_triples",
    "check_admissible",
    "irrep_dim",
    "qdim",
    "qfact",
    "theta",
]


def _require_order(N: int) -> None:
    if not isinstance(N, int) or N < 2:
        raise ValueError(f"N must be an integer >= 2, got {N!r}")


def qdim(N: int, n: int) -> int:
    """Quantum integer [n]_q for q + 1/q = N, as an exact Python int.

    [0]_q = 1 by convention; for n >= 1 the values follow the Chebyshev
    recurrence with [1]_q = 1 and [2]_q = N.  Note [n+1]_q = dim(H_n);
    at N = 2 the sequence degenerates to the classical integers.
    """
    _require_order(N)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return 1
    prev, cur = 0, 1  # [0] of the pure Chebyshev sequence is 0, [1] is 1
    for _ in range(n - 1):
        prev, cur = cur, N * cur - prev
    return cur


def irrep_dim(N: int, k: int) -> int:
    """dim(H_k) = [k+1]_q, the dimension of the k-th irreducible space."""
    return qdim(N, k + 1)


def qfact(N: int, n: int) -> int:
    """Quantum factorial [n]_q! = [n]_q [n-1]_q ... [1]_q; empty product is 1."""
    _require_order(N)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    out = 1
    prev, cur = 0, 1
    for _ in range(n):
        out *= cur
        prev, cur = cur, N * cur - prev
    return out


@dataclass(frozen=True)
class AdmissibleTriple:
    """Leg counts (l, m, k) with k in the fusion range of l and m.

    r = (l + m - k) / 2 counts the contracted (cup) leg pairs; the triple
    is admissible iff l + m - k is even and |l - m| <= k <= l + m.
    """

    l: int
    m: int
    k: int
    r: int

    def __post_init__(self) -> None:
        l, m, k, r = self.l, self.m, self.k, self.r
        if min(l, m, k) < 0:
            raise ValueError(f"leg counts must be >= 0, got ({l},{m},{k})")
        if (l + m - k) % 2 != 0:
            raise ValueError(f"parity violation: l+m-k = {l + m - k} is odd for ({l},{m},{k})")
        if not abs(l - m) <= k <= l + m:
            raise ValueError(f"k = {k} outside fusion range [{abs(l - m)}, {l + m}] for l={l}, m={m}")
        if r != (l + m - k) // 2:
            raise ValueError(f"r = {r} inconsistent with (l+m-k)/2 = {(l + m - k) // 2}")


def check_admissible(l: int, m: int, k: int) -> AdmissibleTriple:
    """Validate (l, m, k) and return the triple with its cup count r."""
    return AdmissibleTriple(l, m, k, (l + m - k) // 2)


def admissible_triples(max_legs: int) -> Iterator[AdmissibleTriple]:
    """All admissible triples with l + m <= max_legs, in sorted order."""
    for l in range(max_legs + 1):
        for m in range(max_legs + 1 - l):
            for k in range(abs(l - m), l + m + 1, 2):
                yield check_admissible(l, m, k)


def theta(N: int, l: int, m: int, k: int) -> Fraction:
    """Theta-net of an admissible triple as an exact positive rational.

    theta(N, l, m, k) =
        [r]! [l-r]! [m-r]! [k+r+1]! / ([l]! [m]! [k]!)   with r = (l+m-k)/2.

    This is the normalization constant that makes the Temperley-Lieb
    intertwiner H_k -> H_l (x) H_m an isometry; it is symmetric in l and m.
    """
    _require_order(N)
    t = check_admissible(l, m, k)
    num = qfact(N, t.r) * qfact(N, l - t.r) * qfact(N, m - t.r) * qfact(N, k + t.r + 1)
    den = qfact(N, l) * qfact(N, m) * qfact(N, k)
    val = Fraction(num, den)
    if val <= 0:
        raise ArithmeticError(f"theta({N},{l},{m},{k}) = {val} is not positive")
    return val
