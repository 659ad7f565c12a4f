"""Exact divergence of graph oracles via breadth-first search with
forbidden balls.

The engine works inside a finite region (a ball around the forbidden
center c) of a possibly infinite graph, and certifies every answer:

* a detour length L found in the region of radius R is exact when
  L <= min_boundary_detour(a) + (R - d(c, b)), because any path escaping
  the region must first reach the boundary sphere and then travel back;
  L = d(a, b) is always exact since a detour is at least a geodesic;
* when b is unreached within the pair's horizon and that same escape
  bound exceeds the horizon, no detour within the horizon exists and
  the pair is DISCONNECTED (divergence infinity);
* when the punctured component of a does not even touch the region
  boundary it is fully enumerated and the disconnection is absolute.

Uncertified pairs trigger region growth; the growth schedule is fixed,
so results are deterministic and independent of the worker count.

The horizon of a pair (a, b) is horizon_factor * d(a, b): detours in the
linear-divergence regime stay within a constant multiple of the pair
distance, and the default factor 8 is generous at desk scale.
"""

from __future__ import annotations

import os
import time
from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .errors import (
    ConfigError,
    InternalError,
    MemoryBudgetError,
    NonTransitiveUnsupportedError,
)
from .oracles import GraphOracle

UNBOUNDED = float("inf")

DEFAULT_MAX_VERTICES = 5_000_000
MAX_VERTICES_ENV = "COXDIV_MAX_VERTICES"

_BIG = 1 << 60  # stand-in for an infinite escape bound


def max_vertex_budget(override: Optional[int] = None) -> int:
    if override is not None:
        return override
    env = os.environ.get(MAX_VERTICES_ENV)
    return int(env) if env else DEFAULT_MAX_VERTICES


# -- queries and results -------------------------------------------------


@dataclass(frozen=True)
class DivergenceQuery:
    """Parameters of Div_lambda(n; delta)."""

    n: int
    delta: Fraction = Fraction(1, 2)
    lam: Fraction = Fraction(0)
    horizon_factor: Fraction = Fraction(8)
    mode: str = "exhaustive"  # or "sampled"
    pair_count: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if not (0 < self.delta < 1):
            raise ConfigError("delta must lie in the open interval (0, 1)")
        if self.lam < 0:
            raise ConfigError("lambda must be >= 0")
        if self.horizon_factor < 1:
            raise ConfigError("horizon_factor must be >= 1")
        if self.mode not in ("exhaustive", "sampled"):
            raise ConfigError("mode must be 'exhaustive' or 'sampled'")
        if self.mode == "sampled" and self.pair_count < 1:
            raise ConfigError("sampled mode needs pair_count >= 1")

    def forbidden_radius(self, r: int) -> Fraction:
        return self.delta * r - self.lam

    def horizon(self, pair_distance: int) -> int:
        return int(self.horizon_factor * pair_distance)


PATH = "PATH"
DISCONNECTED = "DISCONNECTED"
HORIZON_EXCEEDED = "HORIZON_EXCEEDED"


@dataclass(frozen=True)
class DetourResult:
    status: str
    forbidden_radius: Fraction
    length: Optional[int] = None
    path: Optional[tuple] = None


@dataclass(frozen=True)
class DivergenceRow:
    n: int
    value: Optional[int]  # None when unbounded
    unbounded: bool
    horizon_hit: bool
    witness_a: str
    witness_b: str
    witness_c: str
    pairs_scanned: int

    @property
    def status(self) -> str:
        if self.unbounded:
            return "unbounded"
        if self.horizon_hit:
            return "horizon"
        return "ok"


@dataclass(frozen=True)
class DivergenceReport:
    oracle: str
    query: DivergenceQuery
    rows: tuple
    lower_bound_only: bool
    runtime_seconds: float = field(compare=False, default=0.0)


# -- region index --------------------------------------------------------


class BallIndex:
    """Growable BFS ball around a center vertex, with adjacency.

    Vertices are indexed in discovery order (deterministic because
    oracle neighbor order is).  ``ensure(R)`` extends the ball; the CSR
    adjacency of the induced subgraph is rebuilt lazily on demand.
    Duplicate arcs are tolerated: all searches run unweighted.
    """

    def __init__(self, oracle: GraphOracle, center,
                 max_vertices: Optional[int] = None):
        self.oracle = oracle
        self.center = center
        self.max_vertices = max_vertex_budget(max_vertices)
        self.verts = [center]
        self.key_to_idx = {oracle.canonical_key(center): 0}
        self.dist = [0]
        self.radius = 0
        self._frontier = [0]
        self._arcs_u = array("i")
        self._arcs_v = array("i")
        self._boundary_arcs = (array("i"), array("i"))
        self._boundary_done = True
        self._csr = None

    def __len__(self):
        return len(self.verts)

    def ensure(self, radius: int):
        """Grow the ball to the given radius."""
        oracle = self.oracle
        while self.radius < radius:
            nxt = []
            for ui in self._frontier:
                for w in oracle.neighbors(self.verts[ui]):
                    key = oracle.canonical_key(w)
                    wi = self.key_to_idx.get(key)
                    if wi is None:
                        wi = len(self.verts)
                        if wi >= self.max_vertices:
                            raise MemoryBudgetError(
                                f"vertex budget {self.max_vertices} exceeded",
                                radius_reached=self.radius)
                        self.key_to_idx[key] = wi
                        self.verts.append(w)
                        self.dist.append(self.radius + 1)
                        nxt.append(wi)
                    self._arcs_u.append(ui)
                    self._arcs_v.append(wi)
            self._frontier = nxt
            self.radius += 1
            self._boundary_done = False
            self._csr = None
        if not self._boundary_done:
            # edges among boundary vertices, without growing the ball
            eu, ev = array("i"), array("i")
            for ui in self._frontier:
                for w in oracle.neighbors(self.verts[ui]):
                    wi = self.key_to_idx.get(oracle.canonical_key(w))
                    if wi is not None:
                        eu.append(ui)
                        ev.append(wi)
            self._boundary_arcs = (eu, ev)
            self._boundary_done = True
            self._csr = None

    def dist_array(self) -> np.ndarray:
        return np.asarray(self.dist, dtype=np.int32)

    def csr(self) -> csr_matrix:
        if self._csr is None:
            n = len(self.verts)
            parts = [np.frombuffer(a, dtype=np.int32) if len(a) else
                     np.empty(0, dtype=np.int32)
                     for a in (self._arcs_u, self._boundary_arcs[0],
                               self._arcs_v, self._boundary_arcs[1])]
            eu = np.concatenate(parts[:2])
            ev = np.concatenate(parts[2:])
            u = np.concatenate([eu, ev])
            v = np.concatenate([ev, eu])
            data = np.ones(len(u), dtype=np.int8)
            self._csr = csr_matrix((data, (u, v)), shape=(n, n))
        return self._csr

    def index_of(self, vertex) -> Optional[int]:
        return self.key_to_idx.get(self.oracle.canonical_key(vertex))


def bfs_ball(oracle: GraphOracle, center, r: int,
             max_vertices: Optional[int] = None) -> dict:
    """Exact ball of radius r: map vertex -> distance."""
    if r < 0:
        raise ConfigError("radius must be >= 0")
    ball = BallIndex(oracle, center, max_vertices)
    ball.ensure(r)
    return {v: d for v, d in zip(ball.verts, ball.dist)}


def _keep_mask(dist: np.ndarray, rho: Fraction) -> np.ndarray:
    """dist > rho, compared exactly (dist is integral)."""
    return dist.astype(np.int64) * rho.denominator > rho.numerator


# -- single-pair detour --------------------------------------------------


def _locate(ball: BallIndex, vertex, horizon: int):
    """Index of a vertex in the ball, growing it as needed."""
    idx = ball.index_of(vertex)
    while idx is None:
        if ball.radius > 4 * max(horizon, 4):
            raise ConfigError("endpoint unreachable from the center")
        ball.ensure(ball.radius + 2)
        idx = ball.index_of(vertex)
    return idx


def detour_distance(oracle: GraphOracle, a, b, c, forbidden_radius: Fraction,
                    horizon: int, max_vertices: Optional[int] = None,
                    ball: Optional[BallIndex] = None) -> DetourResult:
    """Shortest path from a to b staying strictly outside the ball of the
    given radius around c, certified exact by region growth.

    Returns PATH with an explicit path, or DISCONNECTED when no path of
    length <= horizon exists (certified).  Raises MemoryBudgetError when
    the certificate cannot be reached within the vertex budget.
    """
    rho = Fraction(forbidden_radius)
    if ball is None:
        ball = BallIndex(oracle, c, max_vertices)
    ia = _locate(ball, a, horizon)
    ib = _locate(ball, b, horizon)
    da, db = ball.dist[ia], ball.dist[ib]
    if Fraction(da) <= rho or Fraction(db) <= rho:
        raise ConfigError("endpoints must lie outside the forbidden ball")
    grow = max(2, horizon // 4) if horizon > 0 else 2
    ball.ensure(max(ball.radius, da + db, 2))
    while True:
        dist = ball.dist_array()
        keep = _keep_mask(dist, rho)
        csr = ball.csr()
        indptr, indices = csr.indptr, csr.indices
        n = len(ball.verts)
        seen = np.full(n, -1, dtype=np.int64)
        parent = np.full(n, -1, dtype=np.int64)
        seen[ia] = 0
        frontier = [ia]
        depth = 0
        while frontier and seen[ib] < 0 and depth < horizon:
            depth += 1
            nxt = []
            for u in frontier:
                for w in indices[indptr[u]:indptr[u + 1]]:
                    if keep[w] and seen[w] < 0:
                        seen[w] = depth
                        parent[w] = u
                        nxt.append(int(w))
            frontier = nxt
        boundary = np.flatnonzero((dist == ball.radius) & (seen >= 0))
        # min detour cost from a to the region boundary; unseen boundary
        # vertices cost more than anything explored so far
        if boundary.size:
            m_a = int(seen[boundary].min())
        elif frontier:
            m_a = depth + 1  # a lower bound, valid for the certificates
        else:
            m_a = _BIG
        exit_lb = m_a + (ball.radius - db) if m_a < _BIG else _BIG
        if seen[ib] >= 0:
            length = int(seen[ib])
            if length <= exit_lb:
                path = [ib]
                while path[-1] != ia:
                    path.append(int(parent[path[-1]]))
                path.reverse()
                return DetourResult(PATH, rho, length=length,
                                    path=tuple(ball.verts[i] for i in path))
        else:
            if exit_lb > horizon and (not frontier or depth >= horizon):
                # no in-region path within the horizon, and escaping
                # paths are provably longer than the horizon
                return DetourResult(DISCONNECTED, rho)
        ball.ensure(ball.radius + grow)


def _pair_distance(ball: BallIndex, ia: int, ib: int) -> int:
    """True distance between two ball vertices (region grown as needed)."""
    while True:
        csr = ball.csr()
        indptr, indices = csr.indptr, csr.indices
        n = len(ball.verts)
        seen = np.full(n, -1, dtype=np.int64)
        seen[ia] = 0
        frontier = [ia]
        depth = 0
        while frontier and seen[ib] < 0:
            depth += 1
            nxt = []
            for u in frontier:
                for w in indices[indptr[u]:indptr[u + 1]]:
                    if seen[w] < 0:
                        seen[w] = depth
                        nxt.append(int(w))
            frontier = nxt
        if seen[ib] >= 0:
            d = int(seen[ib])
            # exact once no shorter path can escape the region
            if d <= 2 * ball.radius - ball.dist[ia] - ball.dist[ib]:
                return d
        ball.ensure(ball.radius + 2)


def pair_divergence(oracle: GraphOracle, a, b, query: DivergenceQuery,
                    max_vertices: Optional[int] = None,
                    ball: Optional[BallIndex] = None):
    """Divergence of the pair (a, b) relative to the basepoint center.

    For a vertex-transitive oracle the supremum over centers is realized
    by the fixed basepoint with (a, b) ranging over translates, which is
    how divergence_function consumes this.  Returns an int or UNBOUNDED.
    """
    if not oracle.vertex_transitive:
        raise NonTransitiveUnsupportedError(
            "pair divergence needs a vertex-transitive oracle "
            "(or an explicit center sample)")
    if ball is None:
        ball = BallIndex(oracle, oracle.basepoint, max_vertices)
    ia = _locate(ball, a, 4)
    ib = _locate(ball, b, max(4, ball.dist[ia]))
    r = min(ball.dist[ia], ball.dist[ib])
    rho = query.forbidden_radius(r)
    dab = _pair_distance(ball, ia, ib)
    res = detour_distance(oracle, a, b, ball.center, rho, query.horizon(dab),
                          max_vertices=max_vertices, ball=ball)
    if res.status == DISCONNECTED:
        return UNBOUNDED
    return res.length


# -- exhaustive engine ---------------------------------------------------


def _sssp_unweighted(csr, source: int) -> np.ndarray:
    """Distances from one source, -1 for unreachable vertices.

    breadth_first_order gives the BFS tree in discovery order; levels are
    recovered from it without a per-node Python loop.  A FIFO search
    discovers children in the dequeue order of their parents, so the
    parent positions are non-decreasing along the order and each level is
    a contiguous run ending where the parent position first leaves the
    previous level.
    """
    order, pred = breadth_first_order(csr, source,
                                      return_predecessors=True)
    dist = np.full(csr.shape[0], -1, dtype=np.int64)
    m = len(order)
    if m == 1:
        dist[source] = 0
        return dist
    pos = np.full(csr.shape[0], -1, dtype=np.int64)
    pos[order] = np.arange(m)
    parent_pos = pos[pred[order[1:]]]
    if np.any(np.diff(parent_pos) < 0):  # pragma: no cover - FIFO guard
        raise InternalError("BFS discovery order is not level-contiguous")
    levels = np.empty(m, dtype=np.int64)
    levels[0] = 0
    end = 1  # exclusive end of the current level, in order positions
    depth = 0
    while end < m:
        nxt = 1 + int(np.searchsorted(parent_pos, end, side="left"))
        depth += 1
        levels[end:nxt] = depth
        end = nxt
    dist[order] = levels
    return dist


def _batch_bfs(csr, sources: Sequence[int], workers: int,
               columns: np.ndarray, boundary: np.ndarray) -> tuple:
    """Per-source BFS distances restricted to selected columns.

    Returns (dist[source, column] int64 with -1 for unreachable,
    boundary_min[source] int64 with -1 when the boundary is unreached).
    Sources are chunked; chunk results merge in fixed order, so the
    output does not depend on the worker count.
    """
    sources = list(sources)
    ncol = len(columns)
    if not sources:
        return (np.empty((0, ncol), dtype=np.int64),
                np.empty(0, dtype=np.int64))
    max_cells = 25_000_000
    step = max(1, min(len(sources), max_cells // max(ncol, 1)))
    chunks = [sources[i:i + step] for i in range(0, len(sources), step)]

    def run(chunk):
        out = np.empty((len(chunk), ncol), dtype=np.int64)
        bmin = np.empty(len(chunk), dtype=np.int64)
        for row, src in enumerate(chunk):
            dist = _sssp_unweighted(csr, int(src))
            out[row] = dist[columns]
            if boundary.size:
                bd = dist[boundary]
                bd = bd[bd >= 0]
                bmin[row] = int(bd.min()) if bd.size else -1
            else:
                bmin[row] = -1
        return out, bmin

    if workers <= 1 or len(chunks) == 1:
        parts = [run(ch) for ch in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    return (np.concatenate([p[0] for p in parts], axis=0),
            np.concatenate([p[1] for p in parts], axis=0))


class _RowState:
    """Per-distance-bin accumulators; bins are finalized cumulatively."""

    def __init__(self, n: int):
        self.n = n
        self.best = [0] * (n + 1)
        self.witness = [None] * (n + 1)
        self.unbounded = [False] * (n + 1)
        self.horizon_hit = [False] * (n + 1)
        self.scanned = [0] * (n + 1)

    def min_unbounded(self) -> int:
        for k in range(1, self.n + 1):
            if self.unbounded[k]:
                return k
        return self.n + 1

    def offer(self, dab: int, value: int, witness):
        if value > self.best[dab]:
            self.best[dab] = value
            self.witness[dab] = witness

    def mark_unbounded(self, dab: int, witness):
        if not self.unbounded[dab]:
            self.unbounded[dab] = True
            self.witness[dab] = witness


def _eval_source(query: DivergenceQuery, state: _RowState, dfull, dp,
                 bmin: int, sp: int, r: int, dist_t, targets,
                 region_radius: int, done_masks: dict) -> bool:
    """Evaluate all pairs of one source row; True if growth is needed.

    Resolved pairs are recorded in ``done_masks`` so growth iterations
    never double-count them.
    """
    n = query.n
    drow = dfull[sp]
    src_idx = int(targets[sp])
    rho = query.forbidden_radius(r)
    valid = (drow >= 1) & (drow <= n) & (dist_t >= r)
    # unordered dedup: same-sphere partners only with a larger index
    valid &= ~((dist_t == r) & (targets < src_idx))
    valid &= dist_t * rho.denominator > rho.numerator
    valid &= drow < state.min_unbounded()
    done = done_masks.get(sp)
    if done is not None:
        valid &= ~done
    if not valid.any():
        return False
    hf = query.horizon_factor
    hor = (drow * hf.numerator) // hf.denominator
    exit_lb = (bmin + (region_radius - dist_t)) if bmin >= 0 \
        else np.full_like(dist_t, _BIG)
    reached = dp >= 0
    exact = valid & reached & ((dp == drow) | (dp <= exit_lb))
    disc = valid & ~reached & (exit_lb > hor)
    for tp in np.flatnonzero(exact | disc):
        tp = int(tp)
        dab = int(drow[tp])
        state.scanned[dab] += 1
        if disc[tp]:
            state.mark_unbounded(dab, (sp, tp))
        elif dp[tp] > hor[tp]:
            state.horizon_hit[dab] = True
        else:
            state.offer(dab, int(dp[tp]), (sp, tp))
    pending = valid & ~exact & ~disc
    if pending.any():
        newly_done = exact | disc
        done_masks[sp] = newly_done if done is None else (done | newly_done)
        return True
    done_masks.pop(sp, None)
    return False


def divergence_function(oracle: GraphOracle, query: DivergenceQuery,
                        workers: int = 1,
                        max_vertices: Optional[int] = None) -> DivergenceReport:
    """Div_lambda(n'; delta) for all n' <= n over the given oracle.

    Exhaustive mode enumerates every unordered pair in the radius-n ball
    around the basepoint; sampled mode resolves a seeded random subset
    and reports a lower bound.
    """
    if not oracle.vertex_transitive:
        raise NonTransitiveUnsupportedError(
            "divergence_function requires a vertex-transitive oracle")
    t0 = time.monotonic()
    n = query.n
    ball = BallIndex(oracle, oracle.basepoint, max_vertices)
    # geodesics between ball(n) vertices at distance <= n stay inside
    # radius ceil(3n/2), so true pair distances are exact in this region
    ball.ensure((3 * n + 1) // 2)

    dist = ball.dist_array()
    targets = np.flatnonzero(dist <= n).astype(np.int64)

    if query.mode == "sampled":
        return _sampled_run(oracle, query, ball, targets, t0, max_vertices)

    boundary0 = np.flatnonzero(dist == ball.radius).astype(np.int64)
    dfull, _ = _batch_bfs(ball.csr(), list(targets), workers,
                          targets, boundary0)

    state = _RowState(n)
    pending = list(range(len(targets)))
    done_masks: dict = {}
    while True:
        dist = ball.dist_array()
        dist_t = dist[targets].astype(np.int64)
        boundary = np.flatnonzero(dist == ball.radius).astype(np.int64)
        csr = ball.csr()
        by_r: dict = {}
        for sp in pending:
            by_r.setdefault(int(dist_t[sp]), []).append(sp)
        still_pending = []
        for r in sorted(by_r):
            rho = query.forbidden_radius(r)
            if Fraction(r) <= rho:
                continue  # the whole class sits inside its forbidden ball
            keep = _keep_mask(dist, rho)
            keep_idx = np.flatnonzero(keep)
            remap = np.full(len(dist), -1, dtype=np.int64)
            remap[keep_idx] = np.arange(len(keep_idx))
            sub = csr[keep_idx][:, keep_idx]
            srcs = by_r[r]
            cols = remap[targets]
            col_ok = cols >= 0
            sub_cols = cols[col_ok]
            sub_boundary = remap[boundary]
            sub_boundary = sub_boundary[sub_boundary >= 0]
            dp_part, bmin = _batch_bfs(
                sub, [int(remap[targets[sp]]) for sp in srcs], workers,
                sub_cols, sub_boundary)
            for row_i, sp in enumerate(srcs):
                dp = np.full(len(targets), -1, dtype=np.int64)
                dp[col_ok] = dp_part[row_i]
                if _eval_source(query, state, dfull, dp, int(bmin[row_i]),
                                sp, r, dist_t, targets, ball.radius,
                                done_masks):
                    still_pending.append(sp)
        if not still_pending:
            break
        pending = still_pending
        # single steps: region size can triple per unit of radius, and
        # only still-pending sources are re-examined after growth
        ball.ensure(ball.radius + 1)

    rows = _finalize_rows(oracle, ball, targets, state, n)
    return DivergenceReport(
        oracle=oracle.name, query=query, rows=rows, lower_bound_only=False,
        runtime_seconds=time.monotonic() - t0)


def _finalize_rows(oracle, ball, targets, state: _RowState, n: int) -> tuple:
    rows = []
    value = 0
    witness = None
    unbounded = False
    horizon_hit = False
    scanned = 0
    c_render = oracle.render(ball.center)
    for k in range(1, n + 1):
        scanned += state.scanned[k]
        if state.unbounded[k] and not unbounded:
            unbounded = True
            if state.witness[k] is not None:
                witness = state.witness[k]
        if not unbounded:
            horizon_hit = horizon_hit or state.horizon_hit[k]
            if state.best[k] > value:
                value = state.best[k]
                witness = state.witness[k]
        wa = wb = ""
        if witness is not None:
            sp, tp = witness
            wa = oracle.render(ball.verts[int(targets[sp])])
            wb = oracle.render(ball.verts[int(targets[tp])])
        rows.append(DivergenceRow(
            n=k,
            value=None if unbounded else value,
            unbounded=unbounded,
            horizon_hit=horizon_hit and not unbounded,
            witness_a=wa, witness_b=wb, witness_c=c_render,
            pairs_scanned=scanned,
        ))
    return tuple(rows)


def _sampled_run(oracle, query: DivergenceQuery, ball: BallIndex, targets,
                 t0: float, max_vertices) -> DivergenceReport:
    dist = ball.dist_array()
    n = query.n
    tlist = [int(t) for t in targets]
    cands = []
    for i, ia in enumerate(tlist):
        for ib in tlist[i + 1:]:
            r = int(min(dist[ia], dist[ib]))
            rho = query.forbidden_radius(r)
            if Fraction(int(dist[ia])) <= rho or Fraction(int(dist[ib])) <= rho:
                continue
            cands.append((ia, ib, r))
    rng = Random(query.seed)
    take = min(query.pair_count, len(cands))
    sample = rng.sample(cands, take) if take else []
    state = _RowState(n)
    tpos = {t: k for k, t in enumerate(tlist)}
    for ia, ib, r in sample:
        dab = _pair_distance(ball, ia, ib)
        if not 1 <= dab <= n or dab >= state.min_unbounded():
            continue
        rho = query.forbidden_radius(r)
        res = detour_distance(oracle, ball.verts[ia], ball.verts[ib],
                              ball.center, rho, query.horizon(dab),
                              max_vertices=max_vertices, ball=ball)
        key = (tpos[ia], tpos[ib])
        state.scanned[dab] += 1
        if res.status == DISCONNECTED:
            state.mark_unbounded(dab, key)
        elif res.status == HORIZON_EXCEEDED:
            state.horizon_hit[dab] = True
        else:
            state.offer(dab, res.length, key)
    rows = _finalize_rows(oracle, ball, targets, state, n)
    return DivergenceReport(
        oracle=oracle.name, query=query, rows=rows, lower_bound_only=True,
        runtime_seconds=time.monotonic() - t0)
