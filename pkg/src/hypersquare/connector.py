"""Bounded search for short squared paths between edge triples, plus the
reservoir that connections are later routed through.

The search state is the ordered triple of the last three placed vertices:
appending u to state (p, q, r) is legal iff pqu, pru, qru are all edges,
which makes the new window p, q, r, u a tetrahedron.  Breadth-first
exploration over these states returns a connection with the minimum number
of internal vertices reachable within the budget.
"""

from __future__ import annotations

import dataclasses
import random

from .certify import VertexSeq, is_squared_path
from .core import Config, Hypergraph3, ResourceLimitError, bits_of, derive_seed, mask_of

DEFAULT_BUDGET = 10**6


@dataclasses.dataclass
class Reservoir:
    """Vertex pool for connections; ``used`` grows as interiors are consumed.

    Single-writer: concurrent connections against one reservoir must be
    serialized by the caller.
    """

    members: int
    used: int = 0

    @property
    def available(self) -> int:
        return self.members & ~self.used

    @property
    def member_count(self) -> int:
        return self.members.bit_count()

    @property
    def used_count(self) -> int:
        return self.used.bit_count()


def reservoir_probability(cfg: Config) -> float:
    """Per-vertex inclusion probability (1 - 3/(10 M)) * theta_star**2."""
    return (1.0 - 3.0 / (10.0 * cfg.cap_m)) * cfg.theta_star**2


def sample_reservoir(h: Hypergraph3, cfg: Config, max_retries: int = 64) -> Reservoir:
    """Independent vertex sample; resampled with a stepped seed while the
    realized size exceeds theta_star**2 * n."""
    p = reservoir_probability(cfg)
    bound = cfg.theta_star**2 * h.n
    for attempt in range(max_retries):
        rng = random.Random(derive_seed(cfg.seed, "reservoir", attempt))
        members = 0
        for v in range(h.n):
            if rng.random() < p:
                members |= 1 << v
        if members.bit_count() <= bound:
            return Reservoir(members)
    raise ResourceLimitError(
        f"reservoir within size bound {bound:.2f} not found in {max_retries} samples"
    )


def _normalize_triple(h: Hypergraph3, t, name: str) -> tuple[int, int, int]:
    t = tuple(t)
    if len(t) != 3:
        raise ValueError(f"{name} must have exactly 3 vertices")
    for v in t:
        h.check_vertex(v, name)
    if not h.has_edge(*t):
        raise ValueError(f"{name} {t} is not an edge")
    return t


def _check_endpoints(h, abc, xyz):
    abc = _normalize_triple(h, abc, "start triple")
    xyz = _normalize_triple(h, xyz, "end triple")
    if len(set(abc + xyz)) != 6:
        raise ValueError("the six end vertices must be pairwise distinct")
    return abc, xyz


def _closes(pn, p: int, q: int, r: int, x: int, y: int, z: int) -> bool:
    # appending x, y, z to state (p, q, r) via three legal transitions;
    # xyz itself is an edge by precondition
    return bool(
        (pn[p][q] >> x) & (pn[p][r] >> x) & (pn[q][r] >> x)
        & (pn[q][r] >> y) & (pn[q][x] >> y) & (pn[r][x] >> y)
        & (pn[r][x] >> z) & (pn[r][y] >> z) & (pn[x][y] >> z)
        & 1
    )


def _search(h, abc, xyz, allowed: int, cap_m: int, budget: int):
    """BFS over last-three-vertex states; returns the interior tuple of a
    minimum-length connection or None."""
    pn = h._pn
    x, y, z = xyz
    frontier: dict[tuple[int, int, int], tuple[int, ...]] = {abc: ()}
    for _depth in range(cap_m):
        for (p, q, r), interior in frontier.items():
            if _closes(pn, p, q, r, x, y, z):
                return interior
        if _depth == cap_m - 1:
            break
        nxt: dict[tuple[int, int, int], tuple[int, ...]] = {}
        for (p, q, r), interior in frontier.items():
            cands = pn[p][q] & pn[p][r] & pn[q][r] & allowed
            for u in interior:
                cands &= ~(1 << u)
            for u in bits_of(cands):
                state = (q, r, u)
                if state not in nxt:
                    nxt[state] = interior + (u,)
                    if len(nxt) >= budget:
                        break
            if len(nxt) >= budget:
                break
        if not nxt:
            return None
        frontier = nxt
    return None


def connect(
    h: Hypergraph3,
    abc,
    xyz,
    forbidden=0,
    cap_m: int = 12,
    budget: int = DEFAULT_BUDGET,
) -> VertexSeq | None:
    """Squared path from abc to xyz with fewer than cap_m internal vertices,
    none of them forbidden; None when the bounded search exhausts.

    Precondition violations (non-edges, overlapping or forbidden end
    vertices) raise ValueError and are distinct from search failure.
    """
    abc, xyz = _check_endpoints(h, abc, xyz)
    if cap_m < 1:
        raise ValueError("cap_m must be at least 1")
    fmask = forbidden if isinstance(forbidden, int) else mask_of(forbidden)
    ends = mask_of(abc + xyz)
    if fmask & ends:
        raise ValueError("end vertices may not be forbidden")
    allowed = h.full_mask & ~fmask & ~ends
    interior = _search(h, abc, xyz, allowed, cap_m, budget)
    if interior is None:
        return None
    seq = VertexSeq(abc + interior + xyz)
    assert is_squared_path(h, seq)
    return seq


def count_connections(h: Hypergraph3, abc, xyz, m: int, guard: int = 10**8) -> int:
    """Exact number of ordered interior m-tuples whose concatenation with the
    end triples is a squared path.  Guarded against infeasible enumeration."""
    abc, xyz = _check_endpoints(h, abc, xyz)
    if m < 0:
        raise ValueError("interior length must be nonnegative")
    if h.n**m > guard:
        raise ResourceLimitError(f"n**m = {h.n}**{m} exceeds the enumeration guard")
    pn = h._pn
    x, y, z = xyz
    ends = mask_of(abc + xyz)

    def rec(p: int, q: int, r: int, used: int, depth: int) -> int:
        if depth == m:
            return 1 if _closes(pn, p, q, r, x, y, z) else 0
        total = 0
        cands = pn[p][q] & pn[p][r] & pn[q][r] & ~used & ~ends
        for u in bits_of(cands):
            total += rec(q, r, u, used | (1 << u), depth + 1)
        return total

    return rec(abc[0], abc[1], abc[2], 0, 0)


def connect_through_reservoir(
    h: Hypergraph3,
    r: Reservoir,
    abc,
    xyz,
    cap_m: int = 12,
    budget: int = DEFAULT_BUDGET,
) -> VertexSeq | None:
    """Like connect, but internal vertices come only from the unused part of
    the reservoir; on success they are marked used."""
    abc, xyz = _check_endpoints(h, abc, xyz)
    if cap_m < 1:
        raise ValueError("cap_m must be at least 1")
    ends = mask_of(abc + xyz)
    allowed = r.available & ~ends
    interior = _search(h, abc, xyz, allowed, cap_m, budget)
    if interior is None:
        return None
    seq = VertexSeq(abc + interior + xyz)
    assert is_squared_path(h, seq)
    r.used |= mask_of(interior)
    return seq
