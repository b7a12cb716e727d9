from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest

from genrigid.graph import Graph

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_connected_graph(rng: np.random.Generator, v: int, density: float) -> Graph:
    """Random spanning tree plus each remaining pair with probability ``density``."""
    order = rng.permutation(v)
    edges = set()
    for i in range(1, v):
        j = int(rng.integers(i))
        edges.add(tuple(sorted((int(order[i]), int(order[j])))))
    for a, b in itertools.combinations(range(v), 2):
        if (a, b) not in edges and rng.random() < density:
            edges.add((a, b))
    return Graph.from_edges(v, edges)


def det_leibniz(m) -> Fraction:
    """Determinant by permutation expansion; independent of any elimination code."""
    n = len(m)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(1)
        for i, j in enumerate(perm):
            term *= m[i][j]
            if term == 0:
                break
        total += -term if inversions % 2 else term
    return total


def rank_by_minors(m, p: int | None = None) -> int:
    """Largest r with a non-vanishing r x r minor (mod p when given). Small matrices only."""
    rows, cols = len(m), len(m[0]) if m else 0
    for r in range(min(rows, cols), 0, -1):
        for ri in itertools.combinations(range(rows), r):
            for ci in itertools.combinations(range(cols), r):
                det = det_leibniz([[m[i][j] for j in ci] for i in ri])
                if (det % p if p else det) != 0:
                    return r
    return 0


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
