"""Wall combinatorics of the Coxeter complex.

Walls are identified with positive roots; a chamber is a group element.
Two distinct walls are parallel (disjoint) iff the absolute pairing of
their roots is >= 1, tested exactly via the doubled form: |2B| >= 2.

The scans enumerate the ball of the group via the ShortLex automaton,
carrying element matrices along the depth-first walk, so no per-element
word arithmetic is needed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .coxeter import CoxeterSystem, Element, Root
from .errors import InternalError, SameWallError, SphericalSystemError, TooLargeError
from .scalars import QTWO, QuadExt

CLIQUE_BOUND = 40


@dataclass(frozen=True)
class Wall:
    """A wall: the reflection fixing it and its positive-root normal."""

    root: Root
    reflection: Element

    def key(self):
        return self.root.key()

    def __str__(self):
        return str(self.root)


def _root_from_coords(system: CoxeterSystem, coords) -> Root:
    """Positive representative of +-coords, with its depth if small."""
    sign = CoxeterSystem.column_sign(coords)
    if sign < 0:
        coords = tuple(-x for x in coords)
    rid = system.small.id_of(coords)
    depth = system.small.roots[rid].depth if rid is not None else -1
    return Root(tuple(coords), depth)


def separating_walls(system: CoxeterSystem, u: Element, v: Element) -> list:
    """The walls crossed by a minimal gallery from u to v.

    For a reduced word s1..sd of u^-1 v the i-th reflection is
    u (s1..s_{i-1} s_i s_{i-1}..s1) u^-1; its root is u applied to the
    i-th inversion root of u^-1 v, flipped positive if needed.
    """
    uv = system.multiply(system.inverse(u), v)
    walls = []
    m, _ = system.word_to_matrices(u.word)
    prefix: tuple = ()
    for letter in uv.word:
        root_coords = m[letter]  # current-matrix column = (u * prefix)(alpha)
        refl_word = u.word + prefix + (letter,) + tuple(reversed(prefix)) + tuple(reversed(u.word))
        walls.append(Wall(
            root=_root_from_coords(system, root_coords),
            reflection=system.normal_form(refl_word),
        ))
        m = system.mat_mul_gen_right(m, letter)
        prefix = prefix + (letter,)
    return walls


def wall_side(system: CoxeterSystem, w: Element, wall: Wall) -> int:
    """+1 iff w^-1(root) is positive, else -1.

    The identity chamber is on the + side of every wall.
    """
    image = system.act_inv(w.word, wall.root.coords)
    return CoxeterSystem.column_sign(image)


def _pairing2_parallel(system: CoxeterSystem, c1, c2) -> bool:
    """|2B(c1, c2)| >= 2, exact."""
    p2 = system.form.pairing2(c1, c2)
    return (abs(p2) - QTWO).sign() >= 0


def walls_parallel(system: CoxeterSystem, h1: Wall, h2: Wall) -> bool:
    if h1.key() == h2.key():
        raise SameWallError("parallelism is only defined for distinct walls")
    return _pairing2_parallel(system, h1.root.coords, h2.root.coords)


# -- exact maximum clique (branch and bound on bitmasks) -----------------

def max_clique_masks(adj: Sequence[int]) -> tuple:
    """Exact maximum clique of a graph given as adjacency bitmasks.

    Returns (size, members) with members a sorted tuple of vertex ids.
    Vertices are pre-ordered by descending degree; the bound is a greedy
    colouring of the candidate set.  Exact up to a few dozen vertices.
    """
    n = len(adj)
    if n == 0:
        return 0, ()
    order = sorted(range(n), key=lambda v: (-bin(adj[v]).count("1"), v))
    pos = {v: i for i, v in enumerate(order)}
    radj = [0] * n
    for v in range(n):
        m = adj[v]
        while m:
            low = m & -m
            u = low.bit_length() - 1
            radj[pos[v]] |= 1 << pos[u]
            m ^= low
    best_size = 0
    best_set = 0

    def colour_bound(cand: int) -> int:
        colours = 0
        rest = cand
        while rest:
            colours += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~low
                avail &= ~radj[v]
                rest ^= low
        return colours

    def expand(cur: int, cur_size: int, cand: int):
        nonlocal best_size, best_set
        if not cand:
            if cur_size > best_size:
                best_size, best_set = cur_size, cur
            return
        if cur_size + colour_bound(cand) <= best_size:
            return
        while cand:
            if cur_size + bin(cand).count("1") <= best_size:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            expand(cur | low, cur_size + 1, cand & radj[v])

    expand(0, 0, (1 << n) - 1)
    members = []
    m = best_set
    while m:
        low = m & -m
        members.append(order[low.bit_length() - 1])
        m ^= low
    return best_size, tuple(sorted(members))


def max_parallel_family(system: CoxeterSystem, walls: Sequence[Wall],
                        bound: int = CLIQUE_BOUND) -> tuple:
    """Largest pairwise-parallel subfamily, exactly.

    Returns (size, witness walls).  Raises TooLargeError above ``bound``.
    """
    n = len(walls)
    if n > bound:
        raise TooLargeError(f"{n} walls exceed the exact clique bound {bound}")
    keys = [w.key() for w in walls]
    if len(set(keys)) != n:
        raise InternalError("walls passed to max_parallel_family must be distinct")
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if _pairing2_parallel(system, walls[i].root.coords, walls[j].root.coords):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    size, members = max_clique_masks(adj)
    return size, tuple(walls[i] for i in members)


# -- ball walk ----------------------------------------------------------

def iter_ball(system: CoxeterSystem, radius: int) -> Iterator[tuple]:
    """Depth-first ShortLex walk of the ball.

    Yields (word, M(w), M(w^-1), inversion_root_coords) for every element
    with length <= radius, in ShortLex order.  The inversion list is the
    live DFS stack; callers must copy it if they keep it.
    """
    aut = system.shortlex_automaton
    inv_roots: list = []
    word: list = []

    def rec(state: int, m, minv):
        yield tuple(word), m, minv, inv_roots
        if len(word) == radius:
            return
        for i in range(system.rank):
            nxt = aut.trans[state][i]
            if nxt >= 0:
                word.append(i)
                inv_roots.append(m[i])
                yield from rec(nxt, system.mat_mul_gen_right(m, i),
                               system.mat_mul_gen_left(minv, i))
                inv_roots.pop()
                word.pop()

    yield from rec(0, system.identity_matrix, system.identity_matrix)


class _PairingCache:
    """Memoized exact parallelism tests keyed by root-coordinate pairs."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self.cache: dict = {}

    def parallel(self, c1, c2) -> bool:
        k1 = tuple(x.key() for x in c1)
        k2 = tuple(x.key() for x in c2)
        if k1 > k2:
            k1, k2 = k2, k1
        key = (k1, k2)
        hit = self.cache.get(key)
        if hit is None:
            hit = _pairing2_parallel(self.system, c1, c2)
            self.cache[key] = hit
        return hit


# -- Lemma-style pencil scan --------------------------------------------

@dataclass(frozen=True)
class PencilRow:
    n: int
    min_parallel: int
    witness_word: tuple


@dataclass(frozen=True)
class PencilReport:
    system: str
    radius: int
    rows: tuple
    c_hat: int


def _require_nonspherical(system: CoxeterSystem):
    if system.is_spherical():
        raise SphericalSystemError(
            f"system {system.name!r} is spherical (finite)")


def _max_parallel_size(cache: _PairingCache, roots: Sequence) -> int:
    n = len(roots)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if cache.parallel(roots[i], roots[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    size, _ = max_clique_masks(adj)
    return size


def lemma1_scan(system: CoxeterSystem, radius: int, workers: int = 1) -> PencilReport:
    """Exhaustive pencil scan of the ball.

    For every element w with length n <= radius, takes the separating
    walls of (e, w) (the inversion walls) and records the exact maximum
    pairwise-parallel subfamily; aggregates the minimum per length.
    """
    _require_nonspherical(system)
    if radius < 1:
        raise TooLargeError("radius must be >= 1")
    cache = _PairingCache(system)
    entries = [(tuple(word), list(inv))
               for word, _m, _minv, inv in iter_ball(system, radius) if word]

    def process(chunk):
        local: dict = {}
        for word, inv in chunk:
            size = _max_parallel_size(cache, inv)
            n = len(word)
            cur = local.get(n)
            if cur is None or size < cur[0]:
                local[n] = (size, word)
        return local

    merged: dict = {}
    if workers <= 1:
        locals_ = [process(entries)]
    else:
        step = max(1, len(entries) // workers + 1)
        chunks = [entries[i: i + step] for i in range(0, len(entries), step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            locals_ = list(pool.map(process, chunks))
    for local in locals_:
        for n, (size, word) in sorted(local.items()):
            cur = merged.get(n)
            # deterministic merge: strictly smaller size wins, ties keep
            # the ShortLex-earliest witness
            if cur is None or size < cur[0] or (size == cur[0] and word < cur[1]):
                merged[n] = (size, word)

    rows = tuple(PencilRow(n, merged[n][0], merged[n][1])
                 for n in sorted(merged))
    c_hat = radius
    for c in range(1, radius + 1):
        if all(row.min_parallel >= row.n // c for row in rows):
            c_hat = c
            break
    return PencilReport(system=system.name, radius=radius, rows=rows, c_hat=c_hat)


# -- Parallel-wall scan --------------------------------------------------

@dataclass(frozen=True)
class PWTRow:
    wall_id: str
    cpp_hat: Optional[int]  # None encodes NOT_FOUND
    n_scanned: int
    witnesses: dict = field(compare=False, hash=False, default_factory=dict)


@dataclass(frozen=True)
class PWTReport:
    system: str
    radius: int
    rows: tuple


def wall_distance(system: CoxeterSystem, minv, m, refl_matrix) -> int:
    """Gallery distance from the chamber w to a wall H.

    Uses d(w, H) = (length(w^-1 r w) - 1) / 2, where r is the reflection
    in H: a minimal gallery from w to its mirror image crosses H once at
    the middle, next to a chamber with a panel on H.
    """
    g = _mat_mul(system, _mat_mul(system, minv, refl_matrix), m)
    length = 0
    ident = system.identity_matrix
    while g != ident:
        for i in range(system.rank):
            if CoxeterSystem.column_sign(g[i]) < 0:
                g = system.mat_mul_gen_right(g, i)
                length += 1
                break
        else:
            raise InternalError("no descent found in wall-distance walk")
    if length % 2 != 1:
        raise InternalError("reflection conjugate has even length")
    return (length - 1) // 2


def _mat_mul(system: CoxeterSystem, a, b):
    """Full matrix product a * b on column-stored matrices."""
    rank = system.rank
    cols = []
    for j in range(rank):
        col = [None] * rank
        for r in range(rank):
            acc = None
            for k in range(rank):
                term = a[k][r] * b[j][k]
                acc = term if acc is None else acc + term
            col[r] = acc
        cols.append(tuple(col))
    return tuple(cols)


def pwt_scan(system: CoxeterSystem, radius: int, workers: int = 1,
             all_walls: bool = False) -> PWTReport:
    """Empirical Parallel-Wall-Theorem scan.

    For each simple-reflection wall H (or, with ``all_walls``, every wall
    met by the ball), finds the least D <= radius such that every scanned
    chamber at wall-distance >= D is separated from H's base chamber by a
    wall parallel to H.  Wall-distance is the panel-based gallery
    distance; separation uses the base chamber e, so the candidate
    separating walls of a chamber w are exactly its inversion walls.
    """
    _require_nonspherical(system)
    if radius < 2:
        raise TooLargeError("radius must be >= 2")
    cache = _PairingCache(system)
    entries = [(tuple(word), m, minv, list(inv))
               for word, m, minv, inv in iter_ball(system, radius)]

    wall_list: list = []
    seen_keys = set()
    for j in range(system.rank):
        coords = system.simple[j]
        wall_list.append((f"s{j}", coords, (j,)))
        seen_keys.add(tuple(x.key() for x in coords))
    if all_walls:
        for word, _m, _minv, inv in entries:
            for i, coords in enumerate(inv):
                key = tuple(x.key() for x in coords)
                if key not in seen_keys:
                    seen_keys.add(key)
                    prefix = word[:i]
                    refl_word = prefix + (word[i],) + tuple(reversed(prefix))
                    wall_list.append((str(_root_from_coords(system, coords)),
                                      coords, refl_word))

    def scan_wall(item):
        wall_id, root_coords, refl_word = item
        refl_matrix, _ = system.word_to_matrices(refl_word)
        root_key = tuple(x.key() for x in root_coords)
        per_chamber = []
        for word, m, minv, inv in entries:
            dist = wall_distance(system, minv, m, refl_matrix)
            sep = None
            for coords in inv:
                if tuple(x.key() for x in coords) == root_key:
                    continue
                if cache.parallel(coords, root_coords):
                    sep = coords
                    break
            per_chamber.append((word, dist, sep))
        cpp = None
        for d in range(0, radius + 1):
            if all(sep is not None for _w, dist, sep in per_chamber if dist >= d):
                cpp = d
                break
        witnesses = {}
        if cpp is not None:
            witnesses = {
                word: str(_root_from_coords(system, sep))
                for word, dist, sep in per_chamber if dist >= cpp
            }
        return PWTRow(wall_id=wall_id, cpp_hat=cpp,
                      n_scanned=len(per_chamber), witnesses=witnesses)

    if workers <= 1:
        rows = [scan_wall(item) for item in wall_list]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(scan_wall, wall_list))
    return PWTReport(system=system.name, radius=radius, rows=tuple(rows))
