"""Instance sources: complete, extremal four-part, random, and
degree-targeted hypergraphs.  Every randomized generator is a pure function
of its arguments and seed.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import random

from .core import Hypergraph3, bits_of


@dataclasses.dataclass(frozen=True)
class PikhurkoPartition:
    """Balanced four-part vertex partition; vertex v sits in part v mod 4."""

    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def part_of(self, v: int) -> int:
        return v % 4


def complete(n: int) -> Hypergraph3:
    """All C(n, 3) triples."""
    if n < 3:
        raise ValueError("complete hypergraph needs n >= 3")
    return Hypergraph3(n, itertools.combinations(range(n), 3))


def pikhurko(n: int) -> tuple[Hypergraph3, PikhurkoPartition]:
    """Four-part extremal construction witnessing that the pair-degree
    constant for squared Hamiltonicity cannot drop to 3/4.

    With parts A0..A3 (vertex v in part v mod 4), a triple is an edge iff
      - it has exactly 2 vertices in A0, or
      - it meets A0 and two distinct parts among A1..A3, or
      - it lies inside a single part Ai, i >= 1, or
      - it splits 2 + 1 over two parts Ai, Aj, i, j >= 1.
    Triples inside A0, triples with one vertex in A0 and two in the same
    other part, and transversals of A1, A2, A3 are non-edges.
    """
    if n < 8:
        raise ValueError("four-part construction needs n >= 8")
    edges = []
    for e in itertools.combinations(range(n), 3):
        c = [0, 0, 0, 0]
        for v in e:
            c[v % 4] += 1
        rest_max = max(c[1], c[2], c[3])
        if c[0] == 2:
            edges.append(e)
        elif c[0] == 1 and rest_max == 1:
            edges.append(e)
        elif c[0] == 0 and rest_max >= 2:
            edges.append(e)
    parts = tuple(tuple(v for v in range(n) if v % 4 == i) for i in range(4))
    return Hypergraph3(n, edges), PikhurkoPartition(parts)


def random_hypergraph(n: int, p: float, seed: int) -> Hypergraph3:
    """Each triple included independently with probability p; identical
    (n, p, seed) reproduce identical edge sets."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability p={p} must lie in [0, 1]")
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    rng = random.Random(seed)
    edges = [e for e in itertools.combinations(range(n), 3) if rng.random() < p]
    return Hypergraph3(n, edges)


def _repair_to_pair_degree(n: int, required: int, base_p: float, rng) -> Hypergraph3:
    """Random base of density base_p, then add missing triples through
    deficient pairs until every pair degree reaches ``required``.  Additions
    only increase degrees, so one lexicographic sweep suffices."""
    edges = set(
        e for e in itertools.combinations(range(n), 3) if rng.random() < base_p
    )
    deg = [[0] * n for _ in range(n)]
    comp = [[0] * n for _ in range(n)]
    for a, b, c in edges:
        for u, v, w in ((a, b, c), (a, c, b), (b, c, a)):
            deg[u][v] += 1
            deg[v][u] += 1
            comp[u][v] |= 1 << w
            comp[v][u] |= 1 << w
    full = (1 << n) - 1
    for u in range(n):
        for v in range(u + 1, n):
            while deg[u][v] < required:
                missing = full & ~comp[u][v] & ~(1 << u) & ~(1 << v)
                w = rng.choice(list(bits_of(missing)))
                edges.add(tuple(sorted((u, v, w))))
                for x, y, z in ((u, v, w), (u, w, v), (v, w, u)):
                    deg[x][y] += 1
                    deg[y][x] += 1
                    comp[x][y] |= 1 << z
                    comp[y][x] |= 1 << z
    return Hypergraph3(n, edges)


def dense_random(n: int, delta2_target: float, seed: int) -> Hypergraph3:
    """Random hypergraph repaired until min pair degree >= ceil(delta2_target * n).

    Add-only repair: while some pair is deficient, a uniformly random missing
    triple through it is added, so termination is guaranteed and the result
    is deterministic under the seed.
    """
    if not 0.0 < delta2_target < 1.0:
        raise ValueError(f"delta2_target={delta2_target} must lie in (0, 1)")
    required = math.ceil(delta2_target * n)
    if required > n - 2:
        raise ValueError(
            f"target pair degree {required} unreachable with n={n} (max {n - 2})"
        )
    rng = random.Random(seed)
    return _repair_to_pair_degree(n, required, delta2_target, rng)


def dense_instance(n: int, fraction: float, seed: int) -> Hypergraph3:
    """Probe-friendly variant of dense_random: the target degree is clamped
    to the feasible range [0, n - 2], so grid fractions 0.0 and 1.0 are
    usable (0.0 keeps the sparse random base, 1.0 forces a near-complete
    instance)."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction={fraction} must lie in [0, 1]")
    required = min(math.ceil(fraction * n), max(n - 2, 0))
    rng = random.Random(seed)
    return _repair_to_pair_degree(n, required, fraction, rng)
