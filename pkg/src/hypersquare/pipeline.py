"""End-to-end construction of a squared Hamiltonian cycle, plus the exact
oracles used as ground truth on small instances.

The construction follows the absorption recipe: sample a reservoir, build a
disjoint absorber family avoiding it, chain the family into one absorbing
path, cover the rest with fixed-length squared paths, close everything into
a cycle through the reservoir, and absorb whatever is left into the
absorbing path.  At desk scale the asymptotic guarantees do not apply, so
every stage failure is a first-class reported outcome and a returned cycle
is always certified before it leaves this module.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import time

from . import absorber as absorber_mod
from .absorber import AbsorptionError, PathConstructionError, absorb, build_absorber_family
from .certify import VertexSeq, certify_hamiltonian
from .connector import connect_through_reservoir, sample_reservoir
from .core import Config, Hypergraph3, ResourceLimitError, bits_of, derive_seed, mask_of
from .generators import dense_instance
from .tiling import cover_with_squared_paths


@dataclasses.dataclass
class ConstructionReport:
    """Outcome of one construction run: a certified cycle or the first
    failing stage, with per-stage sizes and timings."""

    outcome: str  # "cycle" or "failure"
    cycle: VertexSeq | None
    stage: str | None
    detail: str | None
    stats: dict
    attempts: int

    @property
    def succeeded(self) -> bool:
        return self.outcome == "cycle"


class _StageFailure(Exception):
    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.detail = detail


def _attempt_construction(h: Hypergraph3, cfg: Config, stats: dict) -> VertexSeq:
    n = h.n
    timings: dict[str, float] = {}
    stats["timings"] = timings

    t0 = time.perf_counter()
    reservoir = sample_reservoir(h, cfg)
    timings["reservoir"] = time.perf_counter() - t0
    stats["reservoir_size"] = reservoir.member_count

    # Bank as much absorption capacity as disjointness allows: the cover
    # leaves up to q - 1 vertices plus the unused reservoir for the final
    # absorption, far more than the asymptotic 2 theta^2 n at these sizes.
    # A family that large can starve the joins of interior vertices on
    # incomplete instances, so smaller families are tried after a join
    # failure before the whole attempt is abandoned.
    t0 = time.perf_counter()
    size = max(1, (n - reservoir.member_count) // 6)
    fam = None
    pa = None
    join_error = None
    while size >= 1:
        fam = build_absorber_family(
            h, reservoir, cfg, min_tuples=size, max_tuples=size
        )
        if not fam.tuples:
            raise _StageFailure("absorber_family", "no absorber tuples found")
        size = min(size, len(fam.tuples))  # greedy may stall below the target
        try:
            pa = absorber_mod.build_absorbing_path(h, fam, reservoir, cfg)
            break
        except PathConstructionError as exc:
            join_error = exc
            size -= 1
    if pa is None:
        raise _StageFailure("absorbing_path", str(join_error)) from join_error
    timings["absorber_family"] = time.perf_counter() - t0
    stats["family_size"] = len(fam.tuples)
    stats["family_degraded"] = fam.degraded
    stats["absorbing_path_size"] = len(pa)

    t0 = time.perf_counter()
    domain = h.full_mask & ~mask_of(pa.vertices) & ~reservoir.members
    paths: list[VertexSeq] = []
    qs = [cfg.q] if cfg.q == 4 else [cfg.q, 4]
    for q_eff in qs:
        if domain.bit_count() < q_eff:
            continue
        res = cover_with_squared_paths(
            h,
            q_eff,
            cfg.mu,
            seed=derive_seed(cfg.seed, "cover", q_eff),
            domain=domain,
        )
        paths.extend(res.paths)
        for s in res.paths:
            domain &= ~mask_of(s.vertices)
    timings["cover"] = time.perf_counter() - t0
    stats["cover_paths"] = len(paths)
    stats["reservoir_budget_ok"] = bool(
        cfg.cap_m * (len(paths) + 1) <= cfg.theta_star**4 * n
    )

    t0 = time.perf_counter()
    ring = list(pa.vertices)
    for piece in paths:
        joined = connect_through_reservoir(
            h, reservoir, tuple(ring[-3:]), piece.start_triple, cfg.cap_m
        )
        if joined is None:
            raise _StageFailure(
                "connect",
                f"no reservoir connection {tuple(ring[-3:])} -> {piece.start_triple}",
            )
        ring.extend(joined.vertices[3:-3])
        ring.extend(piece.vertices)
    closing = connect_through_reservoir(
        h, reservoir, tuple(ring[-3:]), tuple(ring[:3]), cfg.cap_m
    )
    if closing is None:
        raise _StageFailure(
            "connect", f"cannot close the cycle {tuple(ring[-3:])} -> {tuple(ring[:3])}"
        )
    ring.extend(closing.vertices[3:-3])
    timings["connect"] = time.perf_counter() - t0
    stats["reservoir_used"] = reservoir.used_count

    leftover = sorted(set(range(n)) - set(ring))
    stats["leftover_size"] = len(leftover)

    t0 = time.perf_counter()
    if leftover:
        try:
            spliced = absorb(h, pa, fam, leftover)
        except AbsorptionError as exc:
            raise _StageFailure("absorb", str(exc)) from exc
        ring = list(spliced.vertices) + ring[len(pa) :]
    timings["absorb"] = time.perf_counter() - t0

    cycle = VertexSeq(tuple(ring), closed=True)
    if not certify_hamiltonian(h, cycle):
        raise _StageFailure("certify", "assembled cycle failed certification")
    return cycle


def construct_squared_hamiltonian(
    h: Hypergraph3, cfg: Config | None = None, attempts: int = 3
) -> ConstructionReport:
    """Run the staged construction, reseeding up to ``attempts`` times.

    Never returns an uncertified cycle; any stage failure of the last
    attempt is reported with its stage name and detail.
    """
    if h.n < 5:
        raise ValueError("construction needs at least 5 vertices")
    cfg = cfg or Config()
    last_failure: _StageFailure | None = None
    stats: dict = {}
    for attempt in range(max(1, attempts)):
        cfg_a = dataclasses.replace(cfg, seed=derive_seed(cfg.seed, "attempt", attempt))
        stats = {"attempt_seed": cfg_a.seed}
        try:
            cycle = _attempt_construction(h, cfg_a, stats)
            return ConstructionReport("cycle", cycle, None, None, stats, attempt + 1)
        except (_StageFailure, ResourceLimitError) as exc:
            if isinstance(exc, _StageFailure):
                last_failure = exc
            else:
                last_failure = _StageFailure("reservoir", str(exc))
    assert last_failure is not None
    return ConstructionReport(
        "failure",
        None,
        last_failure.stage,
        last_failure.detail,
        stats,
        max(1, attempts),
    )


@dataclasses.dataclass(frozen=True)
class OracleResult:
    """Exact verdict: status is 'yes', 'no', or 'timeout'; yes carries a
    certified witness."""

    status: str
    witness: object = None


class _Deadline:
    __slots__ = ("at", "ticks")

    def __init__(self, seconds: float | None):
        self.at = None if seconds is None else time.perf_counter() + seconds
        self.ticks = 0

    def expired(self) -> bool:
        if self.at is None:
            return False
        self.ticks += 1
        if self.ticks & 0x3FF:
            return False
        return time.perf_counter() > self.at


class _Timeout(Exception):
    pass


def _k4_adjacency(h: Hypergraph3) -> list[int]:
    """adj[u] = bitset of vertices sharing some tetrahedron with u."""
    adj = [0] * h.n
    for a, b, c in h.edges:
        m = h.n3_mask(a, b, c)
        if not m:
            continue
        for d in bits_of(m):
            if d > c:
                for u, v in ((a, b), (a, c), (a, d), (b, c), (b, d), (c, d)):
                    adj[u] |= 1 << v
                    adj[v] |= 1 << u
    return adj


def oracle_has_squared_hamiltonian(
    h: Hypergraph3, time_limit: float | None = 120.0
) -> OracleResult:
    """Exhaustive backtracking for a squared Hamiltonian cycle.

    Vertex 0 is pinned first and the direction fixed by second < last, which
    removes the 2n cyclic symmetries.  States are the last three placed
    vertices; a branch dies when some unplaced vertex no longer has six
    potential tetrahedron partners among the usable vertices, and failed
    (placed-set, state) pairs are memoized.  Intended for n up to about 16.
    """
    n = h.n
    if n < 5:
        raise ValueError("squared Hamiltonian cycles need at least 5 vertices")
    pn = h._pn
    k4adj = _k4_adjacency(h)
    need = min(6, n - 1)
    if any(k4adj[v].bit_count() < need for v in range(n)):
        return OracleResult("no")

    deadline = _Deadline(time_limit)
    full = h.full_mask

    def close_ok(p: int, q: int, r: int, v1: int, v2: int) -> bool:
        return bool(
            (pn[p][q] >> 0) & (pn[p][r] >> 0) & (pn[q][r] >> 0) & 1
        ) and bool(
            (pn[q][r] >> v1) & (pn[q][0] >> v1) & (pn[r][0] >> v1) & 1
        ) and bool(
            (pn[r][0] >> v2) & (pn[r][v1] >> v2) & (pn[0][v1] >> v2) & 1
        )

    def search(v1: int, v2: int) -> tuple[int, ...] | None:
        failed: set[tuple[int, int, int, int]] = set()
        order: list[int] = []

        def rec(used: int, p: int, q: int, r: int, depth: int) -> bool:
            if deadline.expired():
                raise _Timeout
            if depth == n:
                return r > v1 and close_ok(p, q, r, v1, v2)
            key = (used, p, q, r)
            if key in failed:
                return False
            cands = pn[p][q] & pn[p][r] & pn[q][r] & ~used
            if cands:
                unused = full & ~used
                # any unplaced vertex draws its six window mates from the
                # unplaced vertices, the frontier p, q, r, and the fixed head
                scope = (
                    unused
                    | (1 << p)
                    | (1 << q)
                    | (1 << r)
                    | 0b1
                    | (1 << v1)
                    | (1 << v2)
                )
                for u in bits_of(unused):
                    if (k4adj[u] & scope).bit_count() < need:
                        cands = 0
                        break
            for u in bits_of(cands):
                order.append(u)
                if rec(used | (1 << u), q, r, u, depth + 1):
                    return True
                order.pop()
            if len(failed) < 2_000_000:
                failed.add(key)
            return False

        base = 1 | (1 << v1) | (1 << v2)
        if rec(base, 0, v1, v2, 3):
            return (0, v1, v2) + tuple(order)
        return None

    try:
        for v1 in range(1, n):
            for v2 in bits_of(pn[0][v1] & ~0b1 & ~(1 << v1)):
                found = search(v1, v2)
                if found is not None:
                    cycle = VertexSeq(found, closed=True)
                    assert certify_hamiltonian(h, cycle)
                    return OracleResult("yes", cycle)
    except _Timeout:
        return OracleResult("timeout")
    return OracleResult("no")


def oracle_has_perfect_k4_tiling(
    h: Hypergraph3, time_limit: float | None = 120.0
) -> OracleResult:
    """Exact-cover backtracking over tetrahedra, branching on the lowest
    uncovered vertex; failed residual vertex sets are memoized."""
    n = h.n
    if n % 4 != 0 or n == 0:
        return OracleResult("no")
    pn = h._pn
    deadline = _Deadline(time_limit)
    failed: set[int] = set()
    chosen: list[tuple[int, int, int, int]] = []

    def rec(avail: int) -> bool:
        if deadline.expired():
            raise _Timeout
        if not avail:
            return True
        if avail in failed:
            return False
        v = (avail & -avail).bit_length() - 1
        rest = avail & ~(1 << v)
        for x in bits_of(rest):
            yz_base = pn[v][x] & rest
            for y in bits_of(yz_base):
                if y <= x:
                    continue
                zmask = yz_base & pn[v][y] & pn[x][y]
                for z in bits_of(zmask):
                    if z <= y:
                        continue
                    chosen.append((v, x, y, z))
                    if rec(avail & ~((1 << v) | (1 << x) | (1 << y) | (1 << z))):
                        return True
                    chosen.pop()
        if len(failed) < 2_000_000:
            failed.add(avail)
        return False

    try:
        if rec(h.full_mask):
            return OracleResult("yes", [tuple(sorted(t)) for t in chosen])
    except _Timeout:
        return OracleResult("timeout")
    return OracleResult("no")


PROBE_FIELDS = ("fraction", "trial", "oracle", "pipeline", "agreement")


def _probe_cell(args) -> tuple:
    n, fraction, trial, cell_seed, time_limit, run_oracle, run_pipeline = args
    inst = dense_instance(n, fraction, cell_seed)
    oracle_verdict = "skipped"
    if run_oracle:
        oracle_verdict = oracle_has_squared_hamiltonian(inst, time_limit).status
    pipeline_verdict = "skipped"
    if run_pipeline:
        report = construct_squared_hamiltonian(inst, Config(seed=cell_seed))
        pipeline_verdict = report.outcome
    if run_oracle and run_pipeline:
        if pipeline_verdict == "cycle" and oracle_verdict == "no":
            agreement = "violation"
        else:
            agreement = "consistent"
    else:
        agreement = "n/a"
    return (f"{fraction:g}", trial, oracle_verdict, pipeline_verdict, agreement)


def threshold_probe(
    n: int,
    grid,
    trials: int,
    seed: int,
    time_limit: float | None = 60.0,
    run_oracle: bool = True,
    run_pipeline: bool = True,
    jobs: int = 1,
) -> str:
    """CSV report over a grid of target pair-degree fractions.

    For each fraction, ``trials`` seeded instances are generated and judged
    by the exact oracle and/or the construction pipeline.  Output is
    byte-deterministic under the seed; parallel jobs only change wall time.
    """
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    cells = []
    for gi, fraction in enumerate(grid):
        for trial in range(trials):
            cell_seed = derive_seed(seed, "probe", gi, trial)
            cells.append(
                (n, fraction, trial, cell_seed, time_limit, run_oracle, run_pipeline)
            )
    rows = None
    if jobs > 1 and cells:
        import concurrent.futures

        try:
            with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_probe_cell, cells))
        except (OSError, RuntimeError):
            rows = None  # no subprocess support here; fall back to one worker
    if rows is None:
        rows = [_probe_cell(c) for c in cells]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PROBE_FIELDS)
    writer.writerows(rows)
    return buf.getvalue()
