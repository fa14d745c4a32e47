"""Hypergraph representation, degree and neighborhood computations, and the
shared parameter record.

Vertices are dense integers 0..n-1 throughout the package.  Vertex sets are
manipulated as Python integers used as bitsets, so that the hot operation of
every search, intersecting pair neighborhoods, is a handful of bitwise ANDs.
Edges are additionally kept as a frozenset of sorted triples for constant
time membership tests.
"""

from __future__ import annotations

import dataclasses
import hashlib


class ParseError(ValueError):
    """Malformed input text; carries the offending 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ResourceLimitError(RuntimeError):
    """An operation gave up because a search or retry budget ran out."""


def bits_of(mask: int):
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices) -> int:
    """Pack an iterable of vertex ids into a bitset."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def derive_seed(master: int, *tags) -> int:
    """Derive a stable 63-bit sub-seed from a master seed and hashable tags.

    Uses SHA-256 of the repr, so results do not depend on interpreter hash
    randomization and are reproducible across processes.
    """
    text = repr((master,) + tags).encode()
    return int.from_bytes(hashlib.sha256(text).digest()[:8], "big") >> 1


class Hypergraph3:
    """Immutable 3-uniform hypergraph on vertices 0..n-1.

    ``edges`` is a frozenset of sorted vertex triples.  ``pair_neighbors(u, v)``
    returns the bitset N(u, v) = {w : uvw is an edge}.  Instances are safe to
    share across threads; nothing here mutates after construction.
    """

    __slots__ = ("n", "edges", "full_mask", "_pn")

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        canon = set()
        for e in edges:
            t = tuple(sorted(e))
            if len(t) != 3 or t[0] == t[1] or t[1] == t[2]:
                raise ValueError(f"edge {e!r} must have 3 distinct vertices")
            if t[0] < 0 or t[2] >= n:
                raise ValueError(f"edge {e!r} out of range for n={n}")
            canon.add(t)
        self.n = n
        self.edges = frozenset(canon)
        self.full_mask = (1 << n) - 1
        pn = [[0] * n for _ in range(n)]
        for a, b, c in canon:
            pn[a][b] |= 1 << c
            pn[b][a] |= 1 << c
            pn[a][c] |= 1 << b
            pn[c][a] |= 1 << b
            pn[b][c] |= 1 << a
            pn[c][b] |= 1 << a
        self._pn = pn

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, a: int, b: int, c: int) -> bool:
        """Edge membership; total (repeats and out-of-range yield False)."""
        if a > b:
            a, b = b, a
        if b > c:
            b, c = c, b
            if a > b:
                a, b = b, a
        return (a, b, c) in self.edges

    def check_vertex(self, v: int, name: str = "vertex") -> int:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise ValueError(f"{name} {v!r} out of range [0, {self.n})")
        return v

    def pair_neighbors(self, u: int, v: int) -> int:
        """Bitset of w with uvw an edge.  Requires u != v, both in range."""
        self.check_vertex(u)
        self.check_vertex(v)
        if u == v:
            raise ValueError("pair requires two distinct vertices")
        return self._pn[u][v]

    def n3_mask(self, a: int, b: int, c: int) -> int:
        """Bitset of w completing {a, b, c} to a tetrahedron, assuming abc is
        an edge; without that assumption it is just the triple intersection
        of the pair neighborhoods minus {a, b, c}."""
        pn = self._pn
        return pn[a][b] & pn[a][c] & pn[b][c] & ~((1 << a) | (1 << b) | (1 << c))

    def __eq__(self, other):
        return (
            isinstance(other, Hypergraph3)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Hypergraph3(n={self.n}, edges={len(self.edges)})"


def pair_degree(h: Hypergraph3, u: int, v: int) -> int:
    """Number of edges containing both u and v."""
    return h.pair_neighbors(u, v).bit_count()


def min_pair_degree(h: Hypergraph3) -> int:
    """Minimum of pair_degree over all unordered vertex pairs."""
    if h.n < 2:
        raise ValueError("minimum pair degree needs at least 2 vertices")
    pn = h._pn
    return min(
        pn[u][v].bit_count() for u in range(h.n) for v in range(u + 1, h.n)
    )


def vertex_degree(h: Hypergraph3, v: int) -> int:
    """Number of edges containing v."""
    h.check_vertex(v)
    row = h._pn[v]
    return sum(row[u].bit_count() for u in range(h.n)) // 2


def link_graph(h: Hypergraph3, v: int) -> "AuxGraph":
    """Graph on all n vertices whose edges ab satisfy vab in E."""
    h.check_vertex(v)
    return AuxGraph(h.n, h.full_mask, list(h._pn[v]))


def joint_neighborhood3(h: Hypergraph3, a: int, b: int, c: int) -> int:
    """N(a,b) & N(a,c) & N(b,c) minus {a, b, c}, as a bitset."""
    h.check_vertex(a)
    h.check_vertex(b)
    h.check_vertex(c)
    if a == b or a == c or b == c:
        raise ValueError("joint neighborhood requires three distinct vertices")
    return h.n3_mask(a, b, c)


def is_k4(h: Hypergraph3, w: int, x: int, y: int, z: int) -> bool:
    """True iff the four vertices are distinct and span a tetrahedron."""
    if len({w, x, y, z}) != 4:
        return False
    return (
        h.has_edge(w, x, y)
        and h.has_edge(w, x, z)
        and h.has_edge(w, y, z)
        and h.has_edge(x, y, z)
    )


@dataclasses.dataclass(frozen=True)
class Config:
    """Tunable constants for the construction pipeline.

    Defaults are desk-scale choices: small enough that the threshold
    fractions are meaningful at n <= 200, while keeping beta well below
    alpha/8, which the auxiliary-graph minimum-degree arguments require.
    theta_star = 0 is allowed as a degenerate value and yields an empty
    reservoir.
    """

    alpha: float = 0.05
    beta: float = 0.005
    gamma: float = 0.003
    theta_star: float = 0.15
    cap_m: int = 12
    q: int = 8
    tau: float = 0.01
    mu: float = 0.1
    seed: int = 0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "tau", "mu"):
            val = getattr(self, name)
            if not 0.0 < val < 1.0:
                raise ValueError(f"{name}={val} must lie in (0, 1)")
        if not 0.0 <= self.theta_star < 1.0:
            raise ValueError(f"theta_star={self.theta_star} must lie in [0, 1)")
        if self.beta >= self.alpha / 8:
            raise ValueError(
                f"beta={self.beta} must be smaller than alpha/8={self.alpha / 8}"
            )
        if self.cap_m < 1:
            raise ValueError("cap_m must be at least 1")
        if self.q < 4 or self.q % 4 != 0:
            raise ValueError("q must be a positive multiple of 4")
        if not isinstance(self.seed, int):
            raise ValueError("seed must be an integer")

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


class AuxGraph:
    """Immutable simple undirected graph on a subset of 0..n-1.

    ``vmask`` is the vertex set as a bitset and ``adj[v]`` the neighborhood
    bitset of v (zero outside the vertex set).  Symmetry and irreflexivity
    are validated at construction.
    """

    __slots__ = ("n", "vmask", "_adj")

    def __init__(self, n: int, vmask: int, adj: list[int]):
        if len(adj) != n:
            raise ValueError("adjacency list length must equal n")
        if vmask >> n:
            raise ValueError("vertex mask out of range")
        for v in range(n):
            row = adj[v]
            if row >> n:
                raise ValueError(f"adjacency row {v} out of range")
            if not (vmask >> v) & 1:
                if row:
                    raise ValueError(f"vertex {v} outside the graph has neighbors")
                continue
            if (row >> v) & 1:
                raise ValueError(f"loop at vertex {v}")
            if row & ~vmask:
                raise ValueError(f"vertex {v} adjacent to a non-vertex")
        for v in range(n):
            for u in bits_of(adj[v]):
                if not (adj[u] >> v) & 1:
                    raise ValueError(f"adjacency not symmetric at {u},{v}")
        self.n = n
        self.vmask = vmask
        self._adj = list(adj)

    @classmethod
    def from_edges(cls, n: int, vertices, edges) -> "AuxGraph":
        vmask = vertices if isinstance(vertices, int) else mask_of(vertices)
        adj = [0] * n
        for u, v in edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, vmask, adj)

    def has_vertex(self, v: int) -> bool:
        return 0 <= v < self.n and bool((self.vmask >> v) & 1)

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and bool((self._adj[u] >> v) & 1)

    def neighbors_mask(self, v: int) -> int:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    @property
    def num_vertices(self) -> int:
        return self.vmask.bit_count()

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self._adj) // 2

    def vertices(self) -> list[int]:
        return list(bits_of(self.vmask))

    def edges(self):
        """Yield edges as sorted pairs in lexicographic order."""
        for u in bits_of(self.vmask):
            for v in bits_of(self._adj[u]):
                if v > u:
                    yield (u, v)

    def min_degree(self) -> int:
        degs = [self._adj[v].bit_count() for v in bits_of(self.vmask)]
        return min(degs) if degs else 0

    def __repr__(self):
        return f"AuxGraph(|V|={self.num_vertices}, |E|={self.num_edges})"


# Text format: first non-comment line "n <N>", then one edge "i j k" per
# line with i < j < k, '#' starts a comment, duplicates rejected.


def parse_hypergraph(text: str) -> Hypergraph3:
    n = None
    edges = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ParseError(line_no, f"expected header 'n <N>', got {line!r}")
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(line_no, f"bad vertex count {parts[1]!r}") from None
            if n < 0:
                raise ParseError(line_no, "vertex count must be nonnegative")
            continue
        if len(parts) != 3:
            raise ParseError(line_no, f"expected 'i j k', got {line!r}")
        try:
            i, j, k = (int(p) for p in parts)
        except ValueError:
            raise ParseError(line_no, f"non-integer vertex in {line!r}") from None
        if not 0 <= i < j < k < n:
            raise ParseError(line_no, f"edge {i} {j} {k} violates 0 <= i < j < k < {n}")
        if (i, j, k) in edges:
            raise ParseError(line_no, f"duplicate edge {i} {j} {k}")
        edges.add((i, j, k))
    if n is None:
        raise ParseError(1, "missing header 'n <N>'")
    return Hypergraph3(n, edges)


def format_hypergraph(h: Hypergraph3, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"n {h.n}")
    lines.extend(f"{a} {b} {c}" for a, b, c in sorted(h.edges))
    return "\n".join(lines) + "\n"
