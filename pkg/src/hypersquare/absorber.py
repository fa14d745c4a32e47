"""Absorbers: 6-tuples that can swallow one extra vertex without disturbing
the ends of a host path.

A tuple (a, b, c, d, e, f) absorbs v when both abcdef and abcvdef are
squared paths; v is always inserted between c and d.  The family selection
is greedy, lowest-coverage vertex first, instead of the asymptotic random
selection: at desk scale the random density would leave the family empty,
and only the end properties (disjointness, per-vertex coverage, squared
subpaths, reservoir avoidance) matter downstream.
"""

from __future__ import annotations

import dataclasses
import math
import random

from .certify import VertexSeq, is_squared_path, is_v_absorber
from .connector import DEFAULT_BUDGET, Reservoir, connect
from .core import Config, Hypergraph3, derive_seed, mask_of


class PathConstructionError(RuntimeError):
    """A join between two absorber tuples could not be found."""


class AbsorptionError(RuntimeError):
    """Some vertex had no unused absorber tuple left."""

    def __init__(self, vertex: int):
        super().__init__(f"no unused absorber available for vertex {vertex}")
        self.vertex = vertex


def enumerate_v_absorbers(
    h: Hypergraph3,
    v: int,
    exclude=0,
    limit: int | None = None,
    seed: int | None = None,
) -> list[tuple[int, ...]]:
    """Up to ``limit`` distinct v-absorbers avoiding ``exclude``, chosen
    vertex by vertex in alphabetic order a, b, c, d, e, f.

    Each successive vertex is drawn from the intersection of the pair
    neighborhoods its windows require, so every emitted tuple is an absorber
    by construction.  A seed permutes the candidate order, otherwise ids
    ascend.
    """
    h.check_vertex(v)
    excl = exclude if isinstance(exclude, int) else mask_of(exclude)
    base = h.full_mask & ~excl & ~(1 << v)
    pn = h._pn
    order = list(range(h.n))
    if seed is not None:
        random.Random(seed).shuffle(order)

    def picks(mask: int):
        return [u for u in order if (mask >> u) & 1]

    out: list[tuple[int, ...]] = []
    for a in picks(base):
        rest_a = base & ~(1 << a)
        for b in picks(pn[v][a] & rest_a):
            rest_b = rest_a & ~(1 << b)
            for c in picks(pn[a][b] & pn[v][b] & pn[v][a] & rest_b):
                rest_c = rest_b & ~(1 << c)
                dmask = (
                    pn[a][b] & pn[a][c] & pn[b][c] & pn[b][v] & pn[c][v] & rest_c
                )
                for d in picks(dmask):
                    rest_d = rest_c & ~(1 << d)
                    emask = (
                        pn[b][c] & pn[b][d] & pn[c][d] & pn[c][v] & pn[d][v] & rest_d
                    )
                    for e in picks(emask):
                        rest_e = rest_d & ~(1 << e)
                        fmask = (
                            pn[c][d]
                            & pn[c][e]
                            & pn[d][e]
                            & pn[d][v]
                            & pn[e][v]
                            & rest_e
                        )
                        for f in picks(fmask):
                            out.append((a, b, c, d, e, f))
                            if limit is not None and len(out) >= limit:
                                return out
    return out


@dataclasses.dataclass
class AbsorberFamily:
    """Vertex-disjoint absorber tuples plus, per vertex, the indices of the
    tuples that absorb it."""

    tuples: list[tuple[int, ...]]
    per_vertex_index: dict[int, tuple[int, ...]]
    coverage_target: int
    degraded: bool

    @property
    def vertex_mask(self) -> int:
        m = 0
        for t in self.tuples:
            m |= mask_of(t)
        return m

    def coverage(self, v: int) -> int:
        return len(self.per_vertex_index.get(v, ()))


def build_absorber_family(
    h: Hypergraph3,
    r: Reservoir,
    cfg: Config,
    min_tuples: int | None = None,
    max_tuples: int | None = None,
) -> AbsorberFamily:
    """Greedy family selection, lowest-coverage vertex first.

    Stops once every vertex owns at least max(1, ceil(2 * theta_star**2 * n))
    absorbers, or earlier when no disjoint tuple can be added.  ``min_tuples``
    keeps the loop adding tuples past the coverage target and ``max_tuples``
    cuts it off early; the end-to-end construction uses them to balance
    absorption capacity against the room its joins and cover need.  The
    degraded flag records a missed coverage target; it is a report, not an
    error.
    """
    n = h.n
    target = max(1, math.ceil(2 * cfg.theta_star**2 * n))
    goal = min_tuples if min_tuples is not None else 0
    selected: list[tuple[int, ...]] = []
    occupied = r.members
    coverage = [0] * n
    blocked: set[int] = set()
    max_rounds = 4 * n + 64

    for _ in range(max_rounds):
        if max_tuples is not None and len(selected) >= max_tuples:
            break
        needy = [v for v in range(n) if coverage[v] < target and v not in blocked]
        if needy:
            pick = min(needy, key=lambda v: (coverage[v], v))
        elif len(selected) < goal:
            extra = [v for v in range(n) if v not in blocked]
            if not extra:
                break
            pick = min(extra, key=lambda v: (coverage[v], v))
        else:
            break
        cand = enumerate_v_absorbers(
            h,
            pick,
            exclude=occupied,
            limit=1,
            seed=derive_seed(cfg.seed, "absorber", len(selected), pick),
        )
        if not cand:
            blocked.add(pick)
            continue
        t = cand[0]
        selected.append(t)
        occupied |= mask_of(t)
        blocked.clear()
        for u in range(n):
            if is_v_absorber(h, u, t):
                coverage[u] += 1

    per_vertex: dict[int, tuple[int, ...]] = {}
    for v in range(n):
        idx = tuple(i for i, t in enumerate(selected) if is_v_absorber(h, v, t))
        if idx:
            per_vertex[v] = idx
    degraded = any(coverage[v] < target for v in range(n))
    return AbsorberFamily(selected, per_vertex, target, degraded)


def build_absorbing_path(
    h: Hypergraph3,
    fam: AbsorberFamily,
    r: Reservoir,
    cfg: Config,
    budget: int = DEFAULT_BUDGET,
) -> VertexSeq:
    """Chain the family tuples in selection order into one squared path.

    Joins avoid the reservoir and everything already placed, so the result
    lives outside the reservoir, contains every tuple as a consecutive run,
    and has at most (cap_m + 6) * len(fam.tuples) vertices.
    """
    if not fam.tuples:
        raise ValueError("absorber family is empty")
    family_mask = fam.vertex_mask
    seq = list(fam.tuples[0])
    used = mask_of(seq)
    for i, t in enumerate(fam.tuples[1:], start=1):
        # interiors must dodge every family tuple, placed or not, or a later
        # tuple would arrive with one of its vertices already on the path
        ends = mask_of(seq[-3:]) | mask_of(t[:3])
        forbidden = (r.members | used | family_mask) & ~ends
        joined = connect(
            h, tuple(seq[-3:]), t[:3], forbidden=forbidden, cap_m=cfg.cap_m, budget=budget
        )
        if joined is None:
            raise PathConstructionError(
                f"cannot join tuple {i - 1} to tuple {i} "
                f"({tuple(seq[-3:])} -> {t[:3]})"
            )
        interior = joined.vertices[3:-3]
        seq.extend(interior)
        seq.extend(t)
        used |= mask_of(interior) | mask_of(t)
    out = VertexSeq(tuple(seq))
    assert is_squared_path(h, out)
    assert len(out) <= (cfg.cap_m + 6) * len(fam.tuples)
    assert not (mask_of(out.vertices) & r.members)
    return out


def _locate_tuples(pa: VertexSeq, fam: AbsorberFamily) -> list[int]:
    """Start offset of each family tuple inside the path, or raise."""
    vs = pa.vertices
    starts = []
    for t in fam.tuples:
        pos = None
        for i in range(len(vs) - 5):
            if vs[i : i + 6] == t:
                pos = i
                break
        if pos is None:
            raise ValueError(f"tuple {t} is not a contiguous subpath of the host path")
        starts.append(pos)
    return starts


def absorb(h: Hypergraph3, pa: VertexSeq, fam: AbsorberFamily, x) -> VertexSeq:
    """Insert every vertex of x into the host path, one unused absorber tuple
    per vertex, preserving the end triples.

    Vertices are processed one at a time, most constrained first, and each
    takes the unused tuple least useful to the rest; AbsorptionError names
    the first vertex left without an unused absorber.
    """
    xs = sorted(set(x))
    overlap = set(xs) & set(pa.vertices)
    if overlap:
        raise ValueError(f"absorbed vertices already on the path: {sorted(overlap)}")
    starts = _locate_tuples(pa, fam)
    seq = list(pa.vertices)
    used_tuples: set[int] = set()
    remaining = list(xs)
    while remaining:
        def free_options(u: int) -> list[int]:
            return [i for i in fam.per_vertex_index.get(u, ()) if i not in used_tuples]

        v = min(remaining, key=lambda u: (len(free_options(u)), u))
        options = free_options(v)
        if not options:
            raise AbsorptionError(v)
        remaining.remove(v)

        def demand(i: int) -> int:
            return sum(1 for u in remaining if i in fam.per_vertex_index.get(u, ()))

        choice = min(options, key=lambda i: (demand(i), i))
        used_tuples.add(choice)
        pos = starts[choice] + 3
        seq.insert(pos, v)
        starts = [s + 1 if s >= starts[choice] + 1 else s for s in starts]
    out = VertexSeq(tuple(seq))
    assert is_squared_path(h, out)
    assert out.start_triple == pa.start_triple and out.end_triple == pa.end_triple
    assert set(out.vertices) == set(pa.vertices) | set(xs)
    return out
