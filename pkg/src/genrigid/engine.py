"""Randomized rigidity tests and stress diagnostics.

Every random choice in a round comes from a stream keyed by
``(seed, purpose, round index)``, so a round is a pure function of its
inputs and rounds can run in any order.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from .config import RATIONAL_VERTEX_LIMIT, TestConfig
from .graph import Graph, delete_edge, vertex_connectivity_at_least
from .modular import (
    FpMatrix,
    PrimePool,
    RatMatrix,
    build_prime_pool,
    kernel_basis_mod_p,
    rank_mod_p,
    rank_rational,
    rref_mod_p,
    rref_rational,
)

__all__ = [
    "SmallGraphRegime",
    "Rejection",
    "VerdictKind",
    "Certainty",
    "Framework",
    "StressSample",
    "RoundRecord",
    "Verdict",
    "HendricksonResult",
    "constants",
    "sample_framework",
    "round_rng",
    "rigidity_matrix",
    "rigidity_matrix_exact",
    "stress_matrix",
    "stress_matrix_exact",
    "stress_sample",
    "stress_basis",
    "local_params",
    "global_params",
    "local_round",
    "global_round",
    "check_local",
    "check_global",
    "oracle_check_global_rational",
    "k_min_estimate",
    "k_sh_estimate",
    "gauss_rank",
    "dot_space_dim",
    "best_stress",
    "check_hendrickson",
    "check_dimension_one",
]


class SmallGraphRegime(ValueError):
    """Raised when a graph has at most ``d`` vertices, where ``t`` and ``s`` are undefined."""


class Rejection(RuntimeError):
    """No round produced a usable generic sample."""


class VerdictKind(str, Enum):
    GLOBALLY_RIGID = "GloballyRigid"
    NOT_GLOBALLY_RIGID = "NotGloballyRigid"
    LOCALLY_RIGID = "LocallyRigid"
    NOT_LOCALLY_RIGID = "NotLocallyRigid"


class Certainty(str, Enum):
    CERTAIN_YES = "certain_yes"
    CERTAIN_NO = "certain_no"
    PROBABILISTIC_NO = "probabilistic_no"


# stream tags, one per kind of random experiment
_LOCAL, _GLOBAL, _KMIN, _KSH, _RATIONAL = range(5)


def constants(v: int, d: int) -> tuple[int, int]:
    """Return ``(t, s)``: generic rigidity-matrix rank and maximal stress-matrix rank."""
    if d < 1:
        raise ValueError("d must be at least 1")
    if v < d + 1:
        raise SmallGraphRegime(f"v={v} < d+1={d + 1}")
    return v * d - d * (d + 1) // 2, v - d - 1


@dataclass(frozen=True, eq=False)
class Framework:
    coords: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coords, dtype=np.int64, copy=True)
        if arr.ndim != 2:
            raise ValueError("coordinates must be a v x d array")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def v(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    def column(self, i: int) -> np.ndarray:
        return self.coords[:, i]


def round_rng(seed: int, purpose: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(purpose, index)))


def sample_framework(v: int, d: int, N: int, rng: np.random.Generator) -> Framework:
    return Framework(rng.integers(1, N, size=(v, d), endpoint=True))


def _rigidity_int(g: Graph, f: Framework) -> np.ndarray:
    if f.v != g.v:
        raise ValueError(f"framework has {f.v} points but the graph has {g.v} vertices")
    d = f.d
    out = np.zeros((g.e, g.v * d), dtype=np.int64)
    for row, (u, w) in enumerate(g.edges):
        diff = f.coords[u] - f.coords[w]
        out[row, u * d:(u + 1) * d] = diff
        out[row, w * d:(w + 1) * d] = -diff
    return out


def rigidity_matrix(g: Graph, f: Framework, p: int) -> FpMatrix:
    """Half the Jacobian of the squared edge lengths, reduced mod ``p``.

    Rows follow the sorted edge order, columns are grouped by vertex.
    """
    return FpMatrix(_rigidity_int(g, f), p)


def rigidity_matrix_exact(g: Graph, f: Framework) -> RatMatrix:
    return RatMatrix.from_rows(_rigidity_int(g, f).tolist(), cols=g.v * f.d)


def stress_matrix(g: Graph, omega, p: int) -> FpMatrix:
    """Place ``omega`` on the edge entries and balance each row on the diagonal."""
    m = np.zeros((g.v, g.v), dtype=np.int64)
    for (u, w), x in zip(g.edges, omega):
        x = int(x) % p
        m[u, w] = m[w, u] = x
        m[u, u] = (m[u, u] - x) % p
        m[w, w] = (m[w, w] - x) % p
    return FpMatrix(m, p)


def stress_matrix_exact(g: Graph, omega) -> RatMatrix:
    m = [[Fraction(0)] * g.v for _ in range(g.v)]
    for (u, w), x in zip(g.edges, omega):
        m[u][w] = m[w][u] = Fraction(x)
        m[u][u] -= x
        m[w][w] -= x
    return RatMatrix.from_rows(m, cols=g.v)


@dataclass(frozen=True, eq=False)
class StressSample:
    """One random stress ``omega(rho, H)``; ``omega`` is None when the system was rejected."""

    e_rank: int
    omega: Optional[np.ndarray]
    matrix: Optional[FpMatrix]

    @property
    def rejected(self) -> bool:
        return self.omega is None


def _random_rows(rng: np.random.Generator, count: int, e: int, N: int) -> np.ndarray:
    return rng.integers(1, N, size=(count, e), endpoint=True)


def stress_sample(g: Graph, f: Framework, p: int, rng: np.random.Generator, N: int,
                  t: Optional[int] = None) -> StressSample:
    """Pick a random equilibrium stress by solving ``E omega = b``.

    ``E`` is the transposed rigidity matrix with ``e - t`` random rows
    appended; ``b`` has a single 1 in the position of the first random row.
    The sample is rejected unless ``E`` has full column rank ``e``.
    """
    if t is None:
        t = constants(g.v, f.d)[0]
    e = g.e
    if e < t:
        raise ValueError(f"need e >= t, got e={e}, t={t}")
    vd = g.v * f.d
    R = _rigidity_int(g, f) % p
    H = _random_rows(rng, e - t, e, N) % p
    E = np.vstack([R.T, H]) if e else np.zeros((vd, 0), dtype=np.int64)
    b = np.zeros((E.shape[0], 1), dtype=np.int64)
    if e > t:
        b[vd, 0] = 1
    red, pivots = rref_mod_p(np.hstack([E, b]), p, ncols=e)
    rank = len(pivots)
    if rank < e:
        return StressSample(rank, None, None)
    omega = np.zeros(e, dtype=np.int64)
    omega[pivots] = red[:rank, -1]
    # unreachable when rank E = e, kept as a guard
    if np.any(red[rank:, -1]):
        return StressSample(rank, None, None)
    return StressSample(rank, omega, stress_matrix(g, omega, p))


def stress_basis(g: Graph, f: Framework, p: int, t: Optional[int] = None) -> list[FpMatrix]:
    """Stress matrices for a basis of ker(R^T); raises :class:`Rejection` if rank R < t."""
    if t is None:
        t = constants(g.v, f.d)[0]
    R = rigidity_matrix(g, f, p)
    rank = rank_mod_p(R)
    if rank < t:
        raise Rejection(f"rigidity matrix rank {rank} < t={t}")
    if g.e == 0:
        return []
    K = kernel_basis_mod_p(R.T)
    return [stress_matrix(g, K.data[:, j], p) for j in range(K.cols)]


# ---------------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class RoundRecord:
    index: int
    prime: Optional[int]
    rigidity_rank: Optional[int] = None
    e_rank: Optional[int] = None
    stress_rank: Optional[int] = None
    rejected: bool = False
    success: bool = False


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    certainty: Certainty
    false_no_bound: Fraction
    evidence: dict = field(default_factory=dict)
    records: tuple[RoundRecord, ...] = ()

    @property
    def yes(self) -> bool:
        return self.kind in (VerdictKind.GLOBALLY_RIGID, VerdictKind.LOCALLY_RIGID)


@dataclass(frozen=True)
class SamplingParams:
    t: int
    s: int
    N: int
    pool: PrimePool


@functools.lru_cache(maxsize=64)
def _pool(required: int, N: int) -> PrimePool:
    return build_prime_pool(required, N)


def local_params(g: Graph, d: int, N: Optional[int] = None) -> SamplingParams:
    t, s = constants(g.v, d)
    required = 4 * t
    N = N or required
    return SamplingParams(t, s, N, _pool(required, N))


def global_params(g: Graph, d: int, N: Optional[int] = None) -> SamplingParams:
    t, s = constants(g.v, d)
    required = max(4 * t, 4 * g.v * g.e)
    N = N or required
    return SamplingParams(t, s, N, _pool(required, N))


def _small_graph(g: Graph, d: int, yes: VerdictKind, no: VerdictKind) -> Verdict:
    complete = g.is_complete()
    return Verdict(yes if complete else no,
                   Certainty.CERTAIN_YES if complete else Certainty.CERTAIN_NO,
                   Fraction(0), {"rule": "small-graph", "complete": complete})


def local_round(g: Graph, d: int, params: SamplingParams, seed: int, index: int) -> RoundRecord:
    rng = round_rng(seed, _LOCAL, index)
    p = params.pool.choose(rng)
    f = sample_framework(g.v, d, params.N, rng)
    rank = rank_mod_p(rigidity_matrix(g, f, p))
    return RoundRecord(index, p, rigidity_rank=rank, success=rank == params.t)


def _global_sample(g: Graph, d: int, params: SamplingParams, seed: int, purpose: int,
                   index: int) -> tuple[int, Framework, StressSample]:
    rng = round_rng(seed, purpose, index)
    p = params.pool.choose(rng)
    f = sample_framework(g.v, d, params.N, rng)
    return p, f, stress_sample(g, f, p, rng, params.N, params.t)


def global_round(g: Graph, d: int, params: SamplingParams, seed: int, index: int) -> RoundRecord:
    """One independent run of the randomized global test; ``success`` means a certain yes."""
    p, _, sample = _global_sample(g, d, params, seed, _GLOBAL, index)
    if sample.rejected:
        return RoundRecord(index, p, e_rank=sample.e_rank, rejected=True)
    rank = rank_mod_p(sample.matrix)
    return RoundRecord(index, p, e_rank=sample.e_rank, stress_rank=rank, success=rank == params.s)


def _halving_bound(rounds: int) -> Fraction:
    return Fraction(1, 2**rounds)


def check_local(g: Graph, d: int, cfg: TestConfig) -> Verdict:
    """Randomized generic local rigidity test; a yes is always correct."""
    if g.v <= d + 1:
        return _small_graph(g, d, VerdictKind.LOCALLY_RIGID, VerdictKind.NOT_LOCALLY_RIGID)
    if cfg.mode == "rational":
        return _check_local_rational(g, d, cfg)
    params = local_params(g, d, cfg.N)
    evidence = {"t": params.t, "N": params.N, "pool_size": len(params.pool)}
    records = []
    for i in range(cfg.rounds):
        rec = local_round(g, d, params, cfg.seed, i)
        records.append(rec)
        if rec.success:
            return Verdict(VerdictKind.LOCALLY_RIGID, Certainty.CERTAIN_YES, Fraction(0), evidence, tuple(records))
    return Verdict(VerdictKind.NOT_LOCALLY_RIGID, Certainty.PROBABILISTIC_NO,
                   _halving_bound(cfg.rounds), evidence, tuple(records))


def _check_local_rational(g: Graph, d: int, cfg: TestConfig) -> Verdict:
    _guard_rational(g, cfg)
    t, _ = constants(g.v, d)
    N = cfg.N or 4 * t
    evidence = {"t": t, "N": N}
    records = []
    for i in range(cfg.rounds):
        f = sample_framework(g.v, d, N, round_rng(cfg.seed, _RATIONAL, i))
        rank = rank_rational(rigidity_matrix_exact(g, f))
        records.append(RoundRecord(i, None, rigidity_rank=rank, success=rank == t))
        if rank == t:
            return Verdict(VerdictKind.LOCALLY_RIGID, Certainty.CERTAIN_YES, Fraction(0), evidence, tuple(records))
    return Verdict(VerdictKind.NOT_LOCALLY_RIGID, Certainty.PROBABILISTIC_NO,
                   min(Fraction(1), Fraction(t, N)) ** cfg.rounds, evidence, tuple(records))


def check_global(g: Graph, d: int, cfg: TestConfig) -> Verdict:
    """Randomized generic global rigidity test; a yes is always correct."""
    if cfg.mode == "rational":
        return oracle_check_global_rational(g, d, cfg)
    if g.v <= d + 1:
        return _small_graph(g, d, VerdictKind.GLOBALLY_RIGID, VerdictKind.NOT_GLOBALLY_RIGID)
    t, s = constants(g.v, d)
    if g.e < t:
        return Verdict(VerdictKind.NOT_GLOBALLY_RIGID, Certainty.CERTAIN_NO, Fraction(0),
                       {"t": t, "s": s, "rule": "too-few-edges"})
    params = global_params(g, d, cfg.N)
    evidence = {"t": t, "s": s, "N": params.N, "pool_size": len(params.pool)}
    records = []
    for i in range(cfg.rounds):
        rec = global_round(g, d, params, cfg.seed, i)
        records.append(rec)
        if rec.success:
            return Verdict(VerdictKind.GLOBALLY_RIGID, Certainty.CERTAIN_YES, Fraction(0), evidence, tuple(records))
    return Verdict(VerdictKind.NOT_GLOBALLY_RIGID, Certainty.PROBABILISTIC_NO,
                   _halving_bound(cfg.rounds), evidence, tuple(records))


def _guard_rational(g: Graph, cfg: TestConfig) -> None:
    if g.v > RATIONAL_VERTEX_LIMIT and not cfg.force:
        raise ValueError(f"rational mode is limited to {RATIONAL_VERTEX_LIMIT} vertices (v={g.v}); use force")


def oracle_check_global_rational(g: Graph, d: int, cfg: TestConfig) -> Verdict:
    """The global test carried out in exact rational arithmetic.

    No modulus is involved, so the only failure is an unlucky framework or
    random rows, with probability below ``ve/N`` per round.
    """
    _guard_rational(g, cfg)
    if g.v <= d + 1:
        return _small_graph(g, d, VerdictKind.GLOBALLY_RIGID, VerdictKind.NOT_GLOBALLY_RIGID)
    t, s = constants(g.v, d)
    if g.e < t:
        return Verdict(VerdictKind.NOT_GLOBALLY_RIGID, Certainty.CERTAIN_NO, Fraction(0),
                       {"t": t, "s": s, "rule": "too-few-edges"})
    e, vd = g.e, g.v * d
    N = cfg.N or max(4 * t, 4 * g.v * e)
    evidence = {"t": t, "s": s, "N": N}
    records = []
    for i in range(cfg.rounds):
        rng = round_rng(cfg.seed, _RATIONAL, i)
        f = sample_framework(g.v, d, N, rng)
        H = _random_rows(rng, e - t, e, N)
        E = rigidity_matrix_exact(g, f).T.vstack(RatMatrix.from_rows(H.tolist(), cols=e))
        b = [0] * E.rows
        if e > t:
            b[vd] = 1
        red, pivots = rref_rational([list(row) + [Fraction(x)] for row, x in zip(E.entries, b)], ncols=e)
        rank = len(pivots)
        if rank < e:
            records.append(RoundRecord(i, None, e_rank=rank, rejected=True))
            continue
        omega = [Fraction(0)] * e
        for r, c in enumerate(pivots):
            omega[c] = red[r][-1]
        srank = rank_rational(stress_matrix_exact(g, omega))
        records.append(RoundRecord(i, None, e_rank=rank, stress_rank=srank, success=srank == s))
        if srank == s:
            return Verdict(VerdictKind.GLOBALLY_RIGID, Certainty.CERTAIN_YES, Fraction(0), evidence, tuple(records))
    bound = min(Fraction(1), Fraction(g.v * e, N)) ** cfg.rounds
    return Verdict(VerdictKind.NOT_GLOBALLY_RIGID, Certainty.PROBABILISTIC_NO, bound, evidence, tuple(records))


# ---------------------------------------------------------------------------
# diagnostics

def best_stress(g: Graph, d: int, cfg: TestConfig) -> tuple[int, FpMatrix]:
    """Smallest stress-kernel dimension seen over the rounds and the stress achieving it.

    Stops early once the floor ``d + 1`` is reached.
    """
    params = global_params(g, d, cfg.N)
    if g.e < params.t:
        raise Rejection(f"e={g.e} < t={params.t}: no generic stress can be sampled")
    best: Optional[tuple[int, FpMatrix]] = None
    for i in range(cfg.rounds):
        _, _, sample = _global_sample(g, d, params, cfg.seed, _KMIN, i)
        if sample.rejected:
            continue
        k = g.v - rank_mod_p(sample.matrix)
        if best is None or k < best[0]:
            best = (k, sample.matrix)
            if k == d + 1:
                break
    if best is None:
        raise Rejection("every round was rejected; the graph is probably not locally rigid")
    return best


def k_min_estimate(g: Graph, d: int, cfg: TestConfig) -> int:
    """Kernel dimension of a generic equilibrium stress matrix."""
    return best_stress(g, d, cfg)[0]


def k_sh_estimate(g: Graph, d: int, cfg: TestConfig) -> int:
    """Dimension of the intersection of all stress kernels at a generic framework."""
    params = global_params(g, d, cfg.N)
    best: Optional[int] = None
    for i in range(cfg.rounds):
        rng = round_rng(cfg.seed, _KSH, i)
        p = params.pool.choose(rng)
        f = sample_framework(g.v, d, params.N, rng)
        try:
            basis = stress_basis(g, f, p, params.t)
        except Rejection:
            continue
        if basis:
            stacked = FpMatrix(np.vstack([m.data for m in basis]), p)
            k = g.v - rank_mod_p(stacked)
        else:
            k = g.v
        if best is None or k < best:
            best = k
            if k == d + 1:
                break
    if best is None:
        raise Rejection("every round was rejected; the graph is probably not locally rigid")
    return best


def gauss_rank(v: int, d: int, k_sh: int) -> int:
    return v * d - k_sh * d


def dot_space_dim(g: Graph, omega: FpMatrix) -> int:
    """Dimension of the span of the edge dot products of pairs of kernel vectors of ``omega``."""
    p = omega.p
    K = kernel_basis_mod_p(omega).data
    k = K.shape[1]
    if k == 0 or g.e == 0:
        return 0
    us = np.array([u for u, _ in g.edges])
    ws = np.array([w for _, w in g.edges])
    diffs = (K[ws] - K[us]) % p  # e x k
    rows = [(diffs[:, i] * diffs[:, j]) % p for i in range(k) for j in range(i, k)]
    return rank_mod_p(FpMatrix(np.array(rows, dtype=np.int64), p))


@dataclass(frozen=True)
class HendricksonResult:
    connectivity_ok: bool
    redundant_ok: bool

    @property
    def both(self) -> bool:
        return self.connectivity_ok and self.redundant_ok


def check_hendrickson(g: Graph, d: int, cfg: TestConfig) -> HendricksonResult:
    """(d+1)-connectivity and local rigidity after removing any single edge."""
    connectivity_ok = vertex_connectivity_at_least(g, d + 1)
    redundant_ok = all(check_local(delete_edge(g, edge), d, cfg).yes for edge in g.edges)
    return HendricksonResult(connectivity_ok, redundant_ok)


def check_dimension_one(g: Graph) -> bool:
    """On the line, generic global rigidity is exactly 2-connectivity."""
    if g.v < 3:
        raise SmallGraphRegime("use the small-graph rule for v < 3")
    return vertex_connectivity_at_least(g, 2)
