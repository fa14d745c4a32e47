"""Weighted {K2, K3, K4} tiling by local search, bad-pair pruning, the
almost-perfect tetrahedron factor, and a greedy squared-path cover.

Tile weights are fixed at 2, 6, 11 for sizes 2, 3, 4.  The improving moves
are exactly the exchange arguments that force structure on a maximum-weight
tiling: relocating one vertex into a connecting smaller tile, opening a new
good pair, splitting a K4 down to a K2 while growing two other tiles, and
dissolving a K3 or a K4 into other tiles.  Every move strictly increases the
integer weight, so the search terminates; the result is a local optimum of
this move set, which is all the downstream arguments use.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import random

from .certify import VertexSeq, is_squared_path
from .core import Config, Hypergraph3, bits_of, derive_seed, mask_of

WEIGHTS = {2: 2, 3: 6, 4: 11}
# marginal weight gains for growing a tile by one vertex
GROW_GAIN = {2: WEIGHTS[3] - WEIGHTS[2], 3: WEIGHTS[4] - WEIGHTS[3]}
# weight lost when a tile donates one vertex (a K2 donor dissolves)
DONATE_LOSS = {
    2: WEIGHTS[2],
    3: WEIGHTS[3] - WEIGHTS[2],
    4: WEIGHTS[4] - WEIGHTS[3],
}


@dataclasses.dataclass(frozen=True)
class GoodPairOracle:
    """Exact classification of vertex pairs against a pair-degree threshold."""

    threshold: int
    bad_pairs: frozenset[tuple[int, int]]
    bad_mask: tuple[int, ...]

    def is_good(self, u: int, v: int) -> bool:
        return not (self.bad_mask[u] >> v) & 1

    def bad_count(self, v: int, within: int) -> int:
        return (self.bad_mask[v] & within).bit_count()


def classify_pairs(h: Hypergraph3, threshold: int) -> GoodPairOracle:
    """Pairs with degree below the threshold are bad, the rest good."""
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    bad = set()
    mask = [0] * h.n
    pn = h._pn
    for u in range(h.n):
        for v in range(u + 1, h.n):
            if pn[u][v].bit_count() < threshold:
                bad.add((u, v))
                mask[u] |= 1 << v
                mask[v] |= 1 << u
    return GoodPairOracle(threshold, frozenset(bad), tuple(mask))


def prune_bad_vertices(h: Hypergraph3, tau: float, oracle: GoodPairOracle) -> frozenset[int]:
    """Iteratively drop the vertex in the most bad pairs while some vertex
    sits in at least sqrt(tau) * n of them; every survivor then has fewer."""
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1)")
    limit = math.sqrt(tau) * h.n
    alive = h.full_mask
    while alive:
        worst, worst_cnt = -1, -1
        for v in bits_of(alive):
            cnt = oracle.bad_count(v, alive)
            if cnt > worst_cnt:
                worst, worst_cnt = v, cnt
        if worst_cnt < limit:
            break
        alive &= ~(1 << worst)
    return frozenset(bits_of(alive))


@dataclasses.dataclass
class Tiling:
    """Vertex-disjoint good tiles of sizes 2, 3, 4."""

    tiles: list[tuple[int, ...]]

    @property
    def weight(self) -> int:
        return sum(WEIGHTS[len(t)] for t in self.tiles)

    def covered(self) -> set[int]:
        return {v for t in self.tiles for v in t}


def _tile_ok(h: Hypergraph3, oracle: GoodPairOracle, vs: tuple[int, ...]) -> bool:
    """Good and complete: no bad pair, and all triples present (vacuous for
    pairs)."""
    for a, b in itertools.combinations(vs, 2):
        if not oracle.is_good(a, b):
            return False
    for t in itertools.combinations(vs, 3):
        if not h.has_edge(*t):
            return False
    return True


class _SearchState:
    def __init__(self, h, oracle, domain):
        self.h = h
        self.oracle = oracle
        self.domain = sorted(domain)
        self.tiles: list[tuple[int, ...]] = []
        self.owner: dict[int, int] = {}

    def weight(self) -> int:
        return sum(WEIGHTS[len(t)] for t in self.tiles)

    def uncovered(self) -> list[int]:
        return [v for v in self.domain if v not in self.owner]

    def set_tile(self, idx: int, vs: tuple[int, ...]):
        for v in self.tiles[idx]:
            self.owner.pop(v, None)
        self.tiles[idx] = vs
        for v in vs:
            self.owner[v] = idx

    def add_tile(self, vs: tuple[int, ...]):
        self.tiles.append(vs)
        for v in vs:
            self.owner[v] = len(self.tiles) - 1

    def drop_empty(self):
        kept = [t for t in self.tiles if t]
        self.tiles = kept
        self.owner = {v: i for i, t in enumerate(kept) for v in t}

    def connects(self, idx: int, x: int) -> bool:
        t = self.tiles[idx]
        return (
            len(t) <= 3
            and x not in t
            and _tile_ok(self.h, self.oracle, tuple(sorted(t + (x,))))
        )


def _apply_relocation(state: _SearchState) -> bool:
    """Move one vertex into a connecting tile when the weight rises: from
    nowhere (+4/+5), from a good pair (+2/+3), or from a triangle into
    another triangle (+1).  Returns True when a move was applied."""
    best = None
    for idx, t in enumerate(state.tiles):
        if len(t) > 3:
            continue
        gain = GROW_GAIN[len(t)]
        for x in state.domain:
            donor = state.owner.get(x)
            if donor == idx:
                continue
            loss = 0 if donor is None else DONATE_LOSS[len(state.tiles[donor])]
            delta = gain - loss
            if delta <= 0:
                continue
            if not state.connects(idx, x):
                continue
            key = (-delta, idx, x)
            if best is None or key < best:
                best = key
    if best is None:
        return False
    _, idx, x = best
    donor = state.owner.get(x)
    if donor is not None:
        rest = tuple(v for v in state.tiles[donor] if v != x)
        state.set_tile(donor, rest if len(rest) >= 2 else ())
    state.set_tile(idx, tuple(sorted(state.tiles[idx] + (x,))))
    state.drop_empty()
    return True


def _apply_new_pair(state: _SearchState) -> bool:
    unc = state.uncovered()
    for i, u in enumerate(unc):
        for v in unc[i + 1 :]:
            if state.oracle.is_good(u, v):
                state.add_tile((u, v))
                return True
    return False


def _receivers(state: _SearchState, x: int, skip: int) -> list[int]:
    return [
        i
        for i, t in enumerate(state.tiles)
        if i != skip and len(t) <= 3 and state.connects(i, x)
    ]


def _apply_split(state: _SearchState) -> bool:
    """Moves that break up a donor tile into several receivers:
    two K4 vertices out (K4 -> K2, delta 2g - 9), two K3 vertices out
    (K3 dissolves, delta 2g - 6), or three K4 vertices out (K4 dissolves,
    delta 3g - 11)."""
    best = None
    for didx, t in enumerate(state.tiles):
        if len(t) == 4:
            for x, y in itertools.permutations(t, 2):
                rx = _receivers(state, x, didx)
                ry = _receivers(state, y, didx)
                for i in rx:
                    gx = GROW_GAIN[len(state.tiles[i])]
                    for j in ry:
                        if i == j:
                            continue
                        delta = gx + GROW_GAIN[len(state.tiles[j])] - 9
                        if delta <= 0:
                            continue
                        key = (-delta, didx, x, y, i, j, -1, -1)
                        if best is None or key < best:
                            best = key
            for xs in itertools.permutations(t, 3):
                recs = [_receivers(state, x, didx) for x in xs]
                for i in recs[0]:
                    g0 = GROW_GAIN[len(state.tiles[i])]
                    for j in recs[1]:
                        if j == i:
                            continue
                        g1 = GROW_GAIN[len(state.tiles[j])]
                        for k in recs[2]:
                            if k in (i, j):
                                continue
                            delta = g0 + g1 + GROW_GAIN[len(state.tiles[k])] - 11
                            if delta <= 0:
                                continue
                            key = (-delta, didx, xs[0], xs[1], i, j, xs[2], k)
                            if best is None or key < best:
                                best = key
    # sentinel -1 keeps two-vertex and three-vertex keys comparable
        elif len(t) == 3:
            for x, y in itertools.permutations(t, 2):
                rx = _receivers(state, x, didx)
                ry = _receivers(state, y, didx)
                for i in rx:
                    gx = GROW_GAIN[len(state.tiles[i])]
                    for j in ry:
                        if i == j:
                            continue
                        delta = gx + GROW_GAIN[len(state.tiles[j])] - 6
                        if delta <= 0:
                            continue
                        key = (-delta, didx, x, y, i, j, -1, -1)
                        if best is None or key < best:
                            best = key
    if best is None:
        return False
    _, didx, x, y, i, j, z, k = best
    moved = [(x, i), (y, j)] + ([(z, k)] if z >= 0 else [])
    rest = tuple(v for v in state.tiles[didx] if v not in {m for m, _ in moved})
    state.set_tile(didx, rest if len(rest) >= 2 else ())
    for vert, ridx in moved:
        state.set_tile(ridx, tuple(sorted(state.tiles[ridx] + (vert,))))
    state.drop_empty()
    return True


def _local_search(h: Hypergraph3, domain: list[int], oracle: GoodPairOracle, order: list[int]) -> Tiling:
    """One run: greedy good-pair matching in the given vertex order, then
    improving moves until none fires.  The weight rises by at least 1 per
    move and is bounded by 11n/4, so the loop terminates."""
    state = _SearchState(h, oracle, domain)
    unmatched = list(order)
    while len(unmatched) >= 2:
        u = unmatched[0]
        partner = next((v for v in unmatched[1:] if oracle.is_good(u, v)), None)
        if partner is None:
            unmatched.pop(0)
            continue
        state.add_tile(tuple(sorted((u, partner))))
        unmatched.remove(u)
        unmatched.remove(partner)

    guard = 6 * len(domain) + 16
    for _ in range(guard):
        if _apply_relocation(state):
            continue
        if _apply_new_pair(state):
            continue
        if _apply_split(state):
            continue
        break
    else:
        raise AssertionError("tiling local search failed to terminate")
    return Tiling(sorted(tuple(sorted(t)) for t in state.tiles if t))


def weighted_tiling(
    h: Hypergraph3,
    domain,
    oracle: GoodPairOracle,
    seed: int | None = None,
    restarts: int | None = None,
) -> Tiling:
    """Best local optimum over several starts of the exchange-move search.

    Each start is a greedy good-pair matching in a seeded vertex order.  One
    start already satisfies every structural conclusion the exchange
    arguments force; the extra starts recover the exact optimum on micro
    instances, where a single trajectory can strand weight.  Deterministic
    for fixed inputs and seed.
    """
    domain = sorted(domain)
    for v in domain:
        h.check_vertex(v)
    if restarts is None:
        restarts = 48 if len(domain) <= 12 else 4
    base = seed if seed is not None else 0
    best: Tiling | None = None
    for k in range(max(1, restarts)):
        order = list(domain)
        if k > 0 or seed is not None:
            random.Random(derive_seed(base, "tiling-restart", k)).shuffle(order)
        til = _local_search(h, domain, oracle, order)
        if best is None or til.weight > best.weight:
            best = til
    assert best is not None
    for t in best.tiles:
        assert _tile_ok(h, oracle, t)
    seen: set[int] = set()
    for t in best.tiles:
        assert not (seen & set(t))
        seen |= set(t)
    return best


@dataclasses.dataclass
class AlmostK4Factor:
    """Tetrahedron tiles found after pruning, with the leftover accounting."""

    k4_tiles: list[tuple[int, ...]]
    leftover: frozenset[int]
    leftover_bound: float
    within_bound: bool
    tiling: Tiling
    pruned: frozenset[int]


def almost_k4_factor(h: Hypergraph3, cfg: Config) -> AlmostK4Factor:
    """classify_pairs at threshold ceil((3/4 + alpha) n), prune, tile, and
    keep the size-4 tiles.  The leftover bound 2 sqrt(tau) n + 14 is reported
    rather than enforced; below roughly 36 vertices it regularly fails."""
    threshold = math.ceil((0.75 + cfg.alpha) * h.n)
    oracle = classify_pairs(h, threshold)
    survivors = prune_bad_vertices(h, cfg.tau, oracle)
    til = weighted_tiling(h, survivors, oracle, seed=derive_seed(cfg.seed, "tiling"))
    k4s = [t for t in til.tiles if len(t) == 4]
    covered = {v for t in k4s for v in t}
    leftover = frozenset(v for v in range(h.n) if v not in covered)
    bound = 2 * math.sqrt(cfg.tau) * h.n + 14
    return AlmostK4Factor(
        k4s,
        leftover,
        bound,
        len(leftover) <= bound,
        til,
        frozenset(v for v in range(h.n) if v not in survivors),
    )


@dataclasses.dataclass
class CoverResult:
    """Disjoint squared paths of a fixed length plus the uncovered residue."""

    paths: list[VertexSeq]
    uncovered: frozenset[int]
    mu_bound: float
    within_bound: bool


def _first_k4(h: Hypergraph3, avail: int, order: list[int]) -> tuple[int, ...] | None:
    pn = h._pn
    for a in order:
        if not (avail >> a) & 1:
            continue
        for b in order:
            if b <= a or not (pn_ab := pn[a][b] & avail) or not (avail >> b) & 1:
                continue
            for c in order:
                if c <= b or not (pn_ab >> c) & 1:
                    continue
                dmask = pn[a][b] & pn[a][c] & pn[b][c] & avail
                for d in order:
                    if d > c and (dmask >> d) & 1:
                        return (a, b, c, d)
    return None


def cover_with_squared_paths(
    h: Hypergraph3,
    q: int,
    mu: float,
    seed: int | None = None,
    domain=None,
    k4_pool=None,
) -> CoverResult:
    """Greedy cover by vertex-disjoint squared paths with exactly q vertices.

    Each path starts from an unused tetrahedron (taken from k4_pool when
    given, otherwise found directly) and is extended one vertex at a time
    through the last-three-vertices transition rule, flipping to the other
    end when stuck.  Paths that cannot reach length q are discarded and
    their vertices stay uncovered.  The mu * n coverage bound is reported,
    not enforced.
    """
    if q < 4 or q % 4 != 0:
        raise ValueError("q must be a positive multiple of 4")
    if not 0.0 < mu < 1.0:
        raise ValueError("mu must lie in (0, 1)")
    dom_mask = h.full_mask if domain is None else (
        domain if isinstance(domain, int) else mask_of(domain)
    )
    order = list(range(h.n))
    if seed is not None:
        random.Random(seed).shuffle(order)
    pn = h._pn
    avail = dom_mask
    pool = list(k4_pool) if k4_pool else []
    pool_pos = 0
    paths: list[VertexSeq] = []

    while True:
        start = None
        while pool_pos < len(pool):
            cand = tuple(sorted(pool[pool_pos]))
            pool_pos += 1
            if len(cand) != 4 or not h.has_edge(*cand[:3]) or not (
                h.n3_mask(*cand[:3]) >> cand[3]
            ) & 1:
                raise ValueError(f"k4_pool entry {cand} is not a tetrahedron")
            if all((avail >> v) & 1 for v in cand):
                start = cand
                break
        if start is None:
            start = _first_k4(h, avail, order)
        if start is None:
            break
        path = list(start)
        avail &= ~mask_of(path)
        flipped = False
        while len(path) < q:
            p, r, s = path[-3], path[-2], path[-1]
            cands = pn[p][r] & pn[p][s] & pn[r][s] & avail
            if cands:
                u = next(v for v in order if (cands >> v) & 1)
                path.append(u)
                avail &= ~(1 << u)
                continue
            if not flipped:
                path.reverse()
                flipped = True
                continue
            break
        if len(path) == q:
            seq = VertexSeq(tuple(path))
            assert is_squared_path(h, seq)
            paths.append(seq)
        # vertices of a failed partial path stay uncovered but are not
        # offered to later paths, which guarantees termination

    covered = {v for s in paths for v in s.vertices}
    uncovered = frozenset(v for v in bits_of(dom_mask) if v not in covered)
    bound = mu * h.n
    return CoverResult(paths, uncovered, bound, len(uncovered) <= bound)
