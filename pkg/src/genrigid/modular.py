"""Exact dense linear algebra over Z/p and over the rationals, plus prime pools.

The Z/p routines keep residues in ``int64`` numpy arrays. Moduli are capped
below 2**31 so a product of two residues never overflows a machine word.
The rational routines work on :class:`fractions.Fraction` lists and are only
meant for small cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "MAX_MODULUS",
    "FpMatrix",
    "RatMatrix",
    "PrimePool",
    "InconsistentSystem",
    "RankDeficient",
    "sieve_primes",
    "is_prime",
    "build_prime_pool",
    "rref_mod_p",
    "rank_mod_p",
    "kernel_basis_mod_p",
    "solve_mod_p",
    "rref_rational",
    "rank_rational",
    "kernel_basis_rational",
    "solve_rational",
]

MAX_MODULUS = 2**31


class InconsistentSystem(ArithmeticError):
    pass


class RankDeficient(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class FpMatrix:
    """Dense matrix over Z/p. ``data`` is a read-only int64 array of residues."""

    data: np.ndarray
    p: int

    def __post_init__(self):
        p = int(self.p)
        if p < 2 or p >= MAX_MODULUS:
            raise ValueError(f"modulus {p} outside [2, 2**31)")
        arr = np.array(self.data, dtype=object if _needs_object(self.data) else np.int64, copy=True)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
        arr = np.mod(arr, p).astype(np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int, cols: int | None = None) -> "FpMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(np.zeros((0, cols or 0), dtype=np.int64), p)
        return cls(np.array([[int(x) for x in r] for r in rows], dtype=object), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.data.T, self.p)

    def vstack(self, other: "FpMatrix") -> "FpMatrix":
        if other.p != self.p:
            raise ValueError("moduli differ")
        return FpMatrix(np.vstack([self.data, other.data]), self.p)

    def __matmul__(self, other):
        if isinstance(other, FpMatrix):
            if other.p != self.p:
                raise ValueError("moduli differ")
            prod = self.data.astype(object) @ other.data.astype(object)
            return FpMatrix(prod % self.p, self.p)
        vec = np.asarray(other, dtype=object)
        return np.array((self.data.astype(object) @ vec) % self.p, dtype=np.int64)

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __repr__(self):
        return f"FpMatrix({self.rows}x{self.cols}, p={self.p})"


def _needs_object(data) -> bool:
    arr = np.asarray(data)
    if arr.dtype == object:
        return True
    return arr.dtype.kind == "u" and arr.dtype.itemsize >= 8


@dataclass(frozen=True)
class RatMatrix:
    """Dense matrix of exact rationals, stored as a tuple of row tuples."""

    entries: tuple[tuple[Fraction, ...], ...]
    cols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None) -> "RatMatrix":
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged rows")
        return cls(entries, cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix(tuple(zip(*self.entries)) if self.entries else tuple(() for _ in range(self.cols)), self.rows)

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        if other.cols != self.cols:
            raise ValueError("column counts differ")
        return RatMatrix(self.entries + other.entries, self.cols)

    def apply(self, vec: Sequence) -> list[Fraction]:
        return [sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in self.entries]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


# ---------------------------------------------------------------------------
# primes

def sieve_primes(lo: int, hi: int) -> list[int]:
    """Primes in the half-open interval ``(lo, hi]``."""
    if hi < 2 or hi <= lo:
        return []
    mask = np.ones(hi + 1, dtype=bool)
    mask[:2] = False
    for q in range(2, math.isqrt(hi) + 1):
        if mask[q]:
            mask[q * q :: q] = False
    found = np.flatnonzero(mask)
    return [int(x) for x in found[found > lo]]


def is_prime(n: int) -> bool:
    """Trial division; used to spot-check sieve output."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for q in range(3, math.isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimePool:
    """Primes larger than the sampling bound ``N`` to draw moduli from."""

    N: int
    primes: tuple[int, ...]
    required_size: int

    def choose(self, rng: np.random.Generator) -> int:
        return self.primes[int(rng.integers(len(self.primes)))]

    def __len__(self):
        return len(self.primes)


def build_prime_pool(required_size: int, N: int) -> PrimePool:
    """More than ``required_size`` primes, all exceeding ``N``.

    The first sieve runs to ``ceil(8 N ln(4N))``, which the prime number
    theorem says is about enough; the bound doubles until it is.
    """
    if required_size < 1 or N < 2:
        raise ValueError("need required_size >= 1 and N >= 2")
    bound = math.ceil(8 * N * math.log(4 * N))
    primes = sieve_primes(N, bound)
    while len(primes) <= required_size:
        bound *= 2
        primes = sieve_primes(N, bound)
    if primes[-1] >= MAX_MODULUS:
        raise ValueError(f"sampling bound N={N} needs moduli beyond 2**31")
    return PrimePool(N, tuple(primes), required_size)


# ---------------------------------------------------------------------------
# Z/p elimination

def rref_mod_p(a: np.ndarray, p: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of residue array ``a`` (copied) and its pivot columns.

    Only the first ``ncols`` columns are eligible as pivots; the rest ride
    along, which is how augmented systems are solved.
    """
    m = np.array(a, dtype=np.int64, copy=True) % p
    rows, cols = m.shape
    if ncols is None:
        ncols = cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        factors = m[:, c].copy()
        factors[r] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            m[hit] = (m[hit] - np.outer(factors[hit], m[r]) % p) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank_mod_p(M: FpMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(rref_mod_p(M.data, M.p)[1])


def kernel_basis_mod_p(M: FpMatrix) -> FpMatrix:
    """Columns of the result span ker M; one column per free variable of the RREF."""
    p = M.p
    n = M.cols
    if M.rows == 0:
        return FpMatrix.identity(n, p)
    red, pivots = rref_mod_p(M.data, p)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-red[i, f]) % p
    return FpMatrix(basis, p)


def solve_mod_p(A: FpMatrix, b: Sequence[int]) -> np.ndarray:
    """The unique x with Ax = b; A must have full column rank."""
    p = A.p
    bvec = np.mod(np.asarray([int(x) for x in b], dtype=object), p).astype(np.int64)
    if bvec.shape != (A.rows,):
        raise ValueError(f"right-hand side has length {bvec.shape[0]}, expected {A.rows}")
    aug = np.hstack([A.data, bvec.reshape(-1, 1)])
    red, pivots = rref_mod_p(aug, p, ncols=A.cols)
    rank = len(pivots)
    if np.any(red[rank:, -1]):
        raise InconsistentSystem("system is inconsistent")
    if rank < A.cols:
        raise RankDeficient(f"matrix is not of full column rank ({rank} < {A.cols})")
    x = np.zeros(A.cols, dtype=np.int64)
    x[pivots] = red[:rank, -1]
    return x


# ---------------------------------------------------------------------------
# rational elimination

def rref_rational(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    cols = len(m[0])
    if ncols is None:
        ncols = cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        k = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        piv = m[r][c]
        prow = [x / piv for x in m[r]]
        m[r] = prow
        for i in range(len(m)):
            f = m[i][c]
            if i != r and f != 0:
                row = m[i]
                m[i] = [x - f * y if y else x for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank_rational(M: RatMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(rref_rational(M.entries)[1])


def kernel_basis_rational(M: RatMatrix) -> list[list[Fraction]]:
    n = M.cols
    if M.rows == 0:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    red, pivots = rref_rational(M.entries)
    pivset = set(pivots)
    basis = []
    for f in (c for c in range(n) if c not in pivset):
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -red[i][f]
        basis.append(vec)
    return basis


def solve_rational(A: RatMatrix, b: Sequence) -> list[Fraction]:
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    aug = [list(row) + [Fraction(x)] for row, x in zip(A.entries, b)]
    red, pivots = rref_rational(aug, ncols=A.cols)
    rank = len(pivots)
    if any(row[-1] != 0 for row in red[rank:]):
        raise InconsistentSystem("system is inconsistent")
    if rank < A.cols:
        raise RankDeficient(f"matrix is not of full column rank ({rank} < {A.cols})")
    x = [Fraction(0)] * A.cols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][-1]
    return x
