"""Full analysis of one graph and its JSON / text serialization.

JSON field names are fixed. Reading a report rejects unknown or missing
fields, so stored reports can serve as fixtures.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Any, Optional

from .config import TestConfig
from .engine import (
    Rejection,
    RoundRecord,
    Verdict,
    best_stress,
    check_dimension_one,
    check_global,
    check_hendrickson,
    check_local,
    constants,
    dot_space_dim,
    gauss_rank,
    k_sh_estimate,
)
from .graph import Graph

__all__ = [
    "GraphSummary",
    "VerdictSummary",
    "Diagnostics",
    "RigidityReport",
    "ReportFormatError",
    "analyze",
    "render_text",
]


class ReportFormatError(ValueError):
    pass


def _strict_fields(cls, data: dict, where: str) -> dict:
    if not isinstance(data, dict):
        raise ReportFormatError(f"{where}: expected an object")
    expected = {f.name for f in fields(cls)}
    got = set(data)
    if got != expected:
        extra, missing = sorted(got - expected), sorted(expected - got)
        raise ReportFormatError(f"{where}: unknown fields {extra}, missing fields {missing}")
    return data


@dataclass(frozen=True)
class GraphSummary:
    v: int
    e: int
    hash: str

    @classmethod
    def of(cls, g: Graph) -> "GraphSummary":
        return cls(g.v, g.e, g.canonical_hash())


@dataclass(frozen=True)
class VerdictSummary:
    kind: str
    certainty: str
    false_no_bound: str

    @classmethod
    def of(cls, verdict: Verdict) -> "VerdictSummary":
        return cls(verdict.kind.value, verdict.certainty.value, str(verdict.false_no_bound))

    @property
    def bound(self) -> Fraction:
        return Fraction(self.false_no_bound)


@dataclass(frozen=True)
class Hendrickson:
    connectivity_ok: bool
    redundant_ok: bool


@dataclass(frozen=True)
class Diagnostics:
    k_min: Optional[int]
    k_sh: Optional[int]
    gauss_rank: Optional[int]
    dot_space_dim: Optional[int]
    hendrickson: Hendrickson
    dimension_one: Optional[bool]


@dataclass(frozen=True)
class RigidityReport:
    graph: GraphSummary
    dim: int
    t: Optional[int]
    s: Optional[int]
    mode: str
    seed: int
    rounds: int
    round_records: dict[str, tuple[RoundRecord, ...]]
    verdicts: dict[str, VerdictSummary]
    diagnostics: Diagnostics
    false_no_bound: str
    wall_time: float

    @property
    def globally_rigid(self) -> bool:
        return self.verdicts["global"].kind == "GloballyRigid"

    def to_dict(self, include_wall_time: bool = True) -> dict[str, Any]:
        out = asdict(self)
        out["round_records"] = {k: [asdict(r) for r in v] for k, v in self.round_records.items()}
        if not include_wall_time:
            del out["wall_time"]
        return out

    def to_json(self, include_wall_time: bool = True, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(include_wall_time), indent=indent, sort_keys=False)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RigidityReport":
        data = _strict_fields(cls, data, "report")
        records = data["round_records"]
        if not isinstance(records, dict) or set(records) != {"local", "global"}:
            raise ReportFormatError("round_records: expected keys 'local' and 'global'")
        verdicts = data["verdicts"]
        if not isinstance(verdicts, dict) or set(verdicts) != {"local", "global"}:
            raise ReportFormatError("verdicts: expected keys 'local' and 'global'")
        diag = dict(_strict_fields(Diagnostics, data["diagnostics"], "diagnostics"))
        diag["hendrickson"] = Hendrickson(**_strict_fields(Hendrickson, diag["hendrickson"], "hendrickson"))
        return cls(
            graph=GraphSummary(**_strict_fields(GraphSummary, data["graph"], "graph")),
            dim=data["dim"],
            t=data["t"],
            s=data["s"],
            mode=data["mode"],
            seed=data["seed"],
            rounds=data["rounds"],
            round_records={
                k: tuple(RoundRecord(**_strict_fields(RoundRecord, r, f"round_records.{k}")) for r in v)
                for k, v in records.items()
            },
            verdicts={k: VerdictSummary(**_strict_fields(VerdictSummary, v, f"verdicts.{k}"))
                      for k, v in verdicts.items()},
            diagnostics=Diagnostics(**diag),
            false_no_bound=data["false_no_bound"],
            wall_time=data["wall_time"],
        )

    @classmethod
    def from_json(cls, text: str) -> "RigidityReport":
        return cls.from_dict(json.loads(text))


def analyze(g: Graph, cfg: TestConfig) -> RigidityReport:
    """Run both verdicts, the stress diagnostics and the Hendrickson checks on ``g``.

    Diagnostics that need a generic stress (``k_min``, ``k_sh``, Gauss rank,
    dot-space dimension) are ``None`` when the graph is too small or not
    locally rigid, and are always computed modulo primes.
    """
    start = time.perf_counter()
    d = cfg.dim
    try:
        t, s = constants(g.v, d)
    except ValueError:
        t = s = None
    local = check_local(g, d, cfg)
    glob = check_global(g, d, cfg)

    k_min = k_sh = g_rank = dots = None
    if g.v >= d + 2 and local.yes and g.e >= t:
        diag_cfg = TestConfig(dim=d, rounds=cfg.rounds, seed=cfg.seed, N=cfg.N)
        try:
            k_min, omega = best_stress(g, d, diag_cfg)
            dots = dot_space_dim(g, omega)
            k_sh = k_sh_estimate(g, d, diag_cfg)
            g_rank = gauss_rank(g.v, d, k_sh)
        except Rejection:
            pass
    hend = check_hendrickson(g, d, cfg)
    dim_one = check_dimension_one(g) if d == 1 and g.v >= 3 else None

    return RigidityReport(
        graph=GraphSummary.of(g),
        dim=d,
        t=t,
        s=s,
        mode=cfg.mode,
        seed=cfg.seed,
        rounds=cfg.rounds,
        round_records={"local": local.records, "global": glob.records},
        verdicts={"local": VerdictSummary.of(local), "global": VerdictSummary.of(glob)},
        diagnostics=Diagnostics(k_min, k_sh, g_rank, dots,
                                Hendrickson(hend.connectivity_ok, hend.redundant_ok), dim_one),
        false_no_bound=str(glob.false_no_bound),
        wall_time=time.perf_counter() - start,
    )


def _fmt(x) -> str:
    return "n/a" if x is None else str(x)


def render_text(report: RigidityReport, name: str = "") -> str:
    diag = report.diagnostics
    lines = [
        f"graph {name}".rstrip() + f": v={report.graph.v} e={report.graph.e} sha256={report.graph.hash[:16]}",
        f"dim={report.dim} t={_fmt(report.t)} s={_fmt(report.s)} mode={report.mode} "
        f"seed={report.seed} rounds={report.rounds}",
    ]
    for key in ("local", "global"):
        v = report.verdicts[key]
        used = len(report.round_records[key])
        lines.append(f"{key:>6}: {v.kind} ({v.certainty}, false-no bound {v.false_no_bound}, {used} round(s) used)")
    lines.append(f"k_min={_fmt(diag.k_min)} k_sh={_fmt(diag.k_sh)} gauss_rank={_fmt(diag.gauss_rank)} "
                 f"dot_space_dim={_fmt(diag.dot_space_dim)}")
    lines.append(f"hendrickson: connectivity={diag.hendrickson.connectivity_ok} "
                 f"redundant={diag.hendrickson.redundant_ok}")
    if diag.dimension_one is not None:
        lines.append(f"2-connected (dimension-one oracle): {diag.dimension_one}")
    lines.append(f"wall time: {report.wall_time:.3f}s")
    return "\n".join(lines) + "\n"
