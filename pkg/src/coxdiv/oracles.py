"""Concrete Cayley-graph oracles for the divergence engine.

Every oracle exposes the same deterministic contract:

* ``basepoint`` and ``neighbors(v)`` (symmetric, stable order),
* ``canonical_key(v)`` injective bytes for hashing and golden files,
* ``render(v)`` / ``parse(text)`` human-readable round-trip,
* ``vertex_transitive`` declaration.

Vertices are opaque hashable objects; callers must compare them through
``canonical_key``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List

from .coxeter import CoxeterSystem, named_system
from .errors import ConfigError, SpanBudgetError
from .laurent import LaurentPoly, SLMatrix, sl_mul

DEFAULT_DEGREE_BOUND = 24


class GraphOracle:
    """Base contract; see module docstring."""

    name: str = ""
    vertex_transitive: bool = False

    @property
    def basepoint(self):
        raise NotImplementedError

    def neighbors(self, v) -> list:
        raise NotImplementedError

    def canonical_key(self, v) -> bytes:
        raise NotImplementedError

    def render(self, v) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError


class GridOracle(GraphOracle):
    """The integer grid Z^d with unit steps."""

    vertex_transitive = True

    def __init__(self, d: int):
        if d < 1:
            raise ConfigError("grid dimension must be >= 1")
        self.d = d
        self.name = f"grid{d}"

    @property
    def basepoint(self):
        return (0,) * self.d

    def neighbors(self, v) -> list:
        out = []
        for i in range(self.d):
            for step in (1, -1):
                out.append(v[:i] + (v[i] + step,) + v[i + 1:])
        return out

    def canonical_key(self, v) -> bytes:
        return ",".join(str(x) for x in v).encode()

    def render(self, v) -> str:
        return "(" + ",".join(str(x) for x in v) + ")"

    def parse(self, text: str):
        body = text.strip().strip("()")
        coords = tuple(int(x) for x in body.split(",")) if body else ()
        if len(coords) != self.d:
            raise ConfigError(f"expected {self.d} coordinates in {text!r}")
        return coords


class FreeOracle(GraphOracle):
    """The free group of the given rank; vertices are reduced words.

    Letters are +-(i+1); the Cayley graph is the 2*rank-regular tree.
    """

    vertex_transitive = True

    def __init__(self, rank: int):
        if rank < 2:
            raise ConfigError("free rank must be >= 2")
        self.rank = rank
        self.name = f"free{rank}"

    @property
    def basepoint(self):
        return ()

    def neighbors(self, v) -> list:
        out = []
        for i in range(1, self.rank + 1):
            for g in (i, -i):
                if v and v[-1] == -g:
                    out.append(v[:-1])
                else:
                    out.append(v + (g,))
        return out

    def canonical_key(self, v) -> bytes:
        return self.render(v).encode()

    def render(self, v) -> str:
        if not v:
            return "e"
        letters = []
        for g in v:
            base = abs(g) - 1
            ch = chr(ord("a") + base)
            letters.append(ch if g > 0 else ch.upper())
        return "".join(letters)

    def parse(self, text: str):
        text = text.strip()
        if text == "e":
            return ()
        out = []
        for ch in text:
            low = ch.lower()
            idx = ord(low) - ord("a") + 1
            if not 1 <= idx <= self.rank:
                raise ConfigError(f"letter {ch!r} out of range")
            out.append(idx if ch.islower() else -idx)
        return tuple(out)


class CoxeterOracle(GraphOracle):
    """Chambers of the Coxeter complex: the Cayley graph of (W, S).

    A vertex is the pair (M(w), M(w^-1)) of column matrices; the key is
    built from M(w).  Right multiplication by a generator is a rank-one
    column update, so neighbor generation needs no word arithmetic.
    """

    vertex_transitive = True

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self.name = f"coxeter-{system.name}"

    @property
    def basepoint(self):
        return (self.system.identity_matrix, self.system.identity_matrix)

    def neighbors(self, v) -> list:
        m, minv = v
        sys = self.system
        return [
            (sys.mat_mul_gen_right(m, i), sys.mat_mul_gen_left(minv, i))
            for i in range(sys.rank)
        ]

    def canonical_key(self, v) -> bytes:
        m, _ = v
        return repr(tuple(tuple(x.key() for x in col) for col in m)).encode()

    def render(self, v) -> str:
        _, minv = v
        word = self.system.matrix_to_word(minv)
        return "e" if not word else ".".join(str(i) for i in word)

    def parse(self, text: str):
        text = text.strip()
        word = () if text == "e" else tuple(int(p) for p in text.split("."))
        m, minv = self.system.word_to_matrices(word)
        return (m, minv)


class SL2Oracle(GraphOracle):
    """SL_2 over F_q[t, t^-1] with elementary-matrix generators.

    The generating set is { E_12(c t^k), E_21(c t^k) : c in F_q^*,
    k in {-1, 0, 1} }, which is closed under inverses.  Entry spans are
    guarded by ``degree_bound``: exceeding it raises rather than
    truncating, so every completed search is exact.
    """

    vertex_transitive = True

    def __init__(self, q: int, degree_bound: int = DEFAULT_DEGREE_BOUND):
        if degree_bound < 1:
            raise ConfigError("degree_bound must be >= 1")
        self.q = q
        self.degree_bound = degree_bound
        self.name = f"sl2-q{q}"
        gens = []
        params = []
        seen = set()
        for (i, j) in ((0, 1), (1, 0)):
            for k in (-1, 0, 1):
                for c in range(1, q):
                    x = LaurentPoly.term(q, c, k)
                    g = SLMatrix.elementary(q, 2, i, j, x)
                    key = g.entries
                    if key not in seen:
                        seen.add(key)
                        gens.append(g)
                        params.append((i, j, x))
        self.generators: List[SLMatrix] = gens
        self._gen_params = params
        self._pool: dict = {}

    @property
    def basepoint(self):
        return SLMatrix.identity(self.q, 2)

    def _intern(self, m: SLMatrix) -> SLMatrix:
        """Share Laurent entries across matrices; balls repeat them a lot."""
        pool = self._pool
        return SLMatrix(m.q, m.n, tuple(
            pool.setdefault((e.val, e.coeffs), e) for e in m.entries))

    def neighbors(self, v) -> list:
        # right multiplication by E_ij(x) only touches column j:
        # col_j += x * col_i, so skip the generic matrix product
        out = []
        seen = set()
        q = self.q
        e00, e01, e10, e11 = v.entries

        def shift(e, x):
            # e * (c t^k); for c = 1 this is a bare valuation shift
            if not e.coeffs:
                return e
            if len(x.coeffs) == 1 and x.coeffs[0] == 1:
                return LaurentPoly(q, e.val + x.val, e.coeffs)
            return e * x

        for i, j, x in self._gen_params:
            if (i, j) == (0, 1):
                entries = (e00, shift(e00, x) + e01, e10, shift(e10, x) + e11)
            else:
                entries = (shift(e01, x) + e00, e01, shift(e11, x) + e10, e11)
            if entries in seen:
                continue
            seen.add(entries)
            w = SLMatrix(self.q, 2, entries)
            if w.max_span() > self.degree_bound:
                raise SpanBudgetError(
                    f"entry span exceeded degree_bound={self.degree_bound}")
            out.append(self._intern(w))
        return out

    def canonical_key(self, v) -> bytes:
        parts = []
        for e in v.entries:
            coeffs = "".join(str(c) for c in e.coeffs)
            parts.append(f"{len(e.coeffs)}:{e.val}:{coeffs}")
        return "|".join(parts).encode()

    def render(self, v) -> str:
        rows = []
        for i in range(v.n):
            rows.append("[" + ",".join(v[i, j].render() for j in range(v.n)) + "]")
        return "[" + ",".join(rows) + "]"

    def parse(self, text: str):
        body = text.strip()
        if not (body.startswith("[[") and body.endswith("]]")):
            raise ConfigError(f"bad matrix literal {text!r}")
        inner = body[2:-2]
        row_texts = inner.split("],[")
        rows = []
        for rt in row_texts:
            rows.append([LaurentPoly.parse(self.q, p) for p in rt.split(",")])
        return SLMatrix.from_rows(self.q, rows)


def sl2_oracle(q: int, degree_bound: int = DEFAULT_DEGREE_BOUND) -> SL2Oracle:
    return SL2Oracle(q, degree_bound)


def coxeter_oracle(system: CoxeterSystem) -> CoxeterOracle:
    return CoxeterOracle(system)


def grid_oracle(d: int) -> GridOracle:
    return GridOracle(d)


def free_oracle(rank: int) -> FreeOracle:
    return FreeOracle(rank)


@dataclass(frozen=True)
class OracleEntry:
    name: str
    parameters: str
    generating_set: str
    vertex_transitive: bool


ORACLE_REGISTRY = (
    OracleEntry("grid", "d (dimension)", "unit steps +-e_i", True),
    OracleEntry("free", "rank", "free generators and inverses", True),
    OracleEntry("coxeter", "system (named or file)", "simple reflections", True),
    OracleEntry("sl2", "q in {2,3}, degree_bound",
                "E_12(c t^k), E_21(c t^k), c in F_q^*, k in {-1,0,1}", True),
)


def make_oracle(kind: str, **params) -> GraphOracle:
    """Construct an oracle from CLI-style parameters."""
    if kind == "grid":
        return GridOracle(int(params.get("d", 2)))
    if kind == "free":
        return FreeOracle(int(params.get("rank", 2)))
    if kind == "coxeter":
        system = params.get("system")
        if isinstance(system, str):
            system = named_system(system)
        if not isinstance(system, CoxeterSystem):
            raise ConfigError("coxeter oracle needs a system")
        return CoxeterOracle(system)
    if kind == "sl2":
        return SL2Oracle(int(params.get("q", 2)),
                         int(params.get("degree_bound", DEFAULT_DEGREE_BOUND)))
    raise ConfigError(f"unknown oracle kind {kind!r}")
