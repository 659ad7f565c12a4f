"""Coxeter systems: bilinear form, small roots, reduced-word automata and
ShortLex group arithmetic.

Conventions
-----------
* Generators are indexed 0..rank-1; the ShortLex order is the index order.
* The label m = infinity is encoded by the sentinel ``INF`` (0), both in
  code and in system files (where it is written ``inf``).
* Group elements act on root coordinates in the simple-root basis of the
  standard geometric representation.  We work with 2*B (the doubled
  bilinear form), which is integral over Z[sqrt2, sqrt3] for every
  supported label, so all hot-path arithmetic is on integer coefficients.
* An element w is carried around either as its ShortLex normal form
  (an ``Element``) or as the pair of matrices (M(w), M(w^-1)) stored
  column-wise; M(w^-1) is what left-descent tests read.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    ClosureOverflowError,
    ConfigError,
    InternalError,
    UnsupportedLabelError,
)
from .scalars import QZERO, QONE, QTWO, SQRT2, SQRT3, QuadExt

INF = 0  # reserved sentinel for the label m = infinity

SUPPORTED_LABELS = (INF, 1, 2, 3, 4, 6)

# value of -2*cos(pi/m) for each supported label
_MINUS_TWO_COS = {
    1: QuadExt(-2),
    2: QZERO,
    3: QuadExt(-1),
    4: -SQRT2,
    6: -SQRT3,
    INF: QuadExt(-2),
}

# refl_image sentinels
NEGATIVE = -1  # s_i(alpha_i): the root turns negative
DOMINATES = -2  # image dominates, i.e. leaves the small-root set


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric Coxeter matrix with labels in {1, 2, 3, 4, 6, INF}."""

    entries: tuple

    def __post_init__(self):
        m = self.entries
        rank = len(m)
        if rank < 1:
            raise ConfigError("rank must be at least 1")
        for i in range(rank):
            if len(m[i]) != rank:
                raise ConfigError("Coxeter matrix must be square")
            if m[i][i] != 1:
                raise ConfigError("diagonal labels must be 1")
            for j in range(rank):
                if m[i][j] != m[j][i]:
                    raise ConfigError("Coxeter matrix must be symmetric")
                if m[i][j] not in SUPPORTED_LABELS:
                    raise UnsupportedLabelError(
                        f"unsupported label m[{i}][{j}] = {m[i][j]}; "
                        "supported labels are 2, 3, 4, 6 and inf")
                if i != j and m[i][j] == 1:
                    raise ConfigError("off-diagonal labels must be >= 2")

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


@dataclass(frozen=True)
class BilinearForm:
    """The form B with B[i][j] = -cos(pi/m[i][j]); gram2 stores 2*B."""

    rank: int
    gram2: tuple  # rank x rank of QuadExt, integer coefficients

    @cached_property
    def gram(self) -> tuple:
        return tuple(tuple(x.half() for x in row) for row in self.gram2)

    def pairing2(self, u: Sequence[QuadExt], v: Sequence[QuadExt]) -> QuadExt:
        """2*B(u, v)."""
        acc = QZERO
        for i, ui in enumerate(u):
            if ui.is_zero():
                continue
            row = self.gram2[i]
            for j, vj in enumerate(v):
                if not vj.is_zero():
                    acc = acc + ui * row[j] * vj
        return acc

    def pairing(self, u, v) -> QuadExt:
        return self.pairing2(u, v).half()


def build_form(matrix: CoxeterMatrix) -> BilinearForm:
    """Bilinear form of the standard geometric representation."""
    rank = matrix.rank
    gram2 = tuple(
        tuple(QTWO if i == j else _MINUS_TWO_COS[matrix[i, j]] for j in range(rank))
        for i in range(rank)
    )
    return BilinearForm(rank=rank, gram2=gram2)


@dataclass(frozen=True)
class Root:
    """A positive root in simple-root coordinates, with its depth."""

    coords: tuple  # tuple of QuadExt
    depth: int

    def key(self):
        return tuple(x.key() for x in self.coords)

    def is_positive(self) -> bool:
        signs = [x.sign() for x in self.coords]
        return all(s >= 0 for s in signs) and any(s > 0 for s in signs)

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.coords) + ")"


class SmallRootSet:
    """The finite set of small roots, with the reflection-image table.

    ``refl[rid][i]`` is the id of s_i(root rid), or NEGATIVE when the
    root is alpha_i itself, or DOMINATES when the image leaves the set.
    """

    def __init__(self, roots, index, refl):
        self.roots = roots
        self.index = index
        self.refl = refl

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def id_of(self, coords) -> Optional[int]:
        return self.index.get(tuple(x.key() for x in coords))


def small_roots(form: BilinearForm, bound: int = 20000) -> SmallRootSet:
    """Breadth-first closure of the simple roots under the small-root rule.

    From a small root beta and generator i (beta != alpha_i), the image
    s_i(beta) is a new small root iff 2*B(alpha_i, beta) lies strictly in
    (-2, 0).  A pairing <= -2 means the image dominates and the branch
    stops; a pairing >= 0 sends beta to a root of smaller or equal depth,
    which the closure has already produced.
    """
    rank = form.rank
    roots: list[Root] = []
    index: dict = {}
    refl: list[list[int]] = []

    def add(root: Root) -> int:
        rid = len(roots)
        roots.append(root)
        index[root.key()] = rid
        refl.append([DOMINATES] * rank)
        return rid

    for i in range(rank):
        coords = tuple(QONE if j == i else QZERO for j in range(rank))
        add(Root(coords, depth=1))

    qi = 0
    while qi < len(roots):
        root = roots[qi]
        for i in range(rank):
            if qi == i and root.depth == 1:
                refl[qi][i] = NEGATIVE
                continue
            f2 = QZERO
            row = form.gram2[i]
            for j, vj in enumerate(root.coords):
                if not vj.is_zero():
                    f2 = f2 + row[j] * vj
            image = list(root.coords)
            image[i] = image[i] - f2
            key = tuple(x.key() for x in image)
            known = index.get(key)
            if known is not None:
                refl[qi][i] = known
                continue
            s = f2.sign()
            if s < 0 and (f2 + QTWO).sign() > 0:
                if len(roots) >= bound:
                    raise ClosureOverflowError(
                        f"small-root closure exceeded bound {bound}")
                refl[qi][i] = add(Root(tuple(image), depth=root.depth + 1))
            elif s >= 0:
                # image has smaller depth; the closure must already hold it
                raise InternalError(
                    "small-root closure missed a lower-depth image")
            # else: pairing <= -2, image dominates; leave DOMINATES
        qi += 1
    return SmallRootSet(roots, index, refl)


REJECT = -1


class WordAutomaton:
    """Deterministic automaton over the generator alphabet.

    States are subsets of small-root ids; every state is accepting and
    REJECT (-1) is absorbing.  With ``shortlex=False`` the accepted
    language is exactly the reduced words; with ``shortlex=True`` it is
    the ShortLex-least reduced word of each element.
    """

    def __init__(self, small: SmallRootSet, rank: int, shortlex: bool):
        self.small = small
        self.rank = rank
        self.shortlex = shortlex
        self.states: list[frozenset] = []
        self.trans: list[tuple] = []
        self._build()

    def _build(self):
        small, rank = self.small, self.rank
        refl = small.refl
        start = frozenset()
        ids = {start: 0}
        self.states = [start]
        queue = [start]
        qi = 0
        while qi < len(queue):
            state = queue[qi]
            qi += 1
            row = []
            for i in range(rank):
                if i in state:  # simple root ids coincide with generator ids
                    row.append(REJECT)
                    continue
                nxt = {i}
                for rid in state:
                    img = refl[rid][i]
                    if img >= 0:
                        nxt.add(img)
                if self.shortlex:
                    for j in range(i):
                        img = refl[j][i]  # s_i(alpha_j)
                        if img >= 0:
                            nxt.add(img)
                nxt = frozenset(nxt)
                nid = ids.get(nxt)
                if nid is None:
                    nid = len(ids)
                    ids[nxt] = nid
                    self.states.append(nxt)
                    queue.append(nxt)
                row.append(nid)
            self.trans.append(tuple(row))

    @property
    def start(self) -> int:
        return 0

    def step(self, state: int, letter: int) -> int:
        if state == REJECT:
            return REJECT
        return self.trans[state][letter]

    def accepts(self, word: Iterable[int]) -> bool:
        state = 0
        for letter in word:
            state = self.trans[state][letter]
            if state == REJECT:
                return False
        return True

    def count_words(self, max_length: int) -> list:
        """Number of accepted words of each length 0..max_length."""
        counts = []
        vec = {0: 1}
        for _ in range(max_length + 1):
            counts.append(sum(vec.values()))
            nxt: dict = {}
            for state, mult in vec.items():
                for t in self.trans[state]:
                    if t != REJECT:
                        nxt[t] = nxt.get(t, 0) + mult
            vec = nxt
        return counts

    def words(self, max_length: int) -> Iterator[tuple]:
        """All accepted words of length <= max_length, in ShortLex order
        of the word itself (depth-first, smaller letters first)."""
        stack: list[int] = []

        def rec(state: int):
            yield tuple(stack)
            if len(stack) == max_length:
                return
            for i in range(self.rank):
                nxt = self.trans[state][i]
                if nxt != REJECT:
                    stack.append(i)
                    yield from rec(nxt)
                    stack.pop()

        yield from rec(0)

    def language_is_finite(self) -> bool:
        """True iff the automaton accepts only finitely many words.

        Decided exactly: the language is infinite iff some reachable
        state lies on a directed cycle of non-reject transitions.
        """
        n = len(self.trans)
        color = [0] * n  # 0 unvisited, 1 on stack, 2 done
        stack = [(0, 0)]
        color[0] = 1
        while stack:
            state, nxt_i = stack[-1]
            if nxt_i < self.rank:
                stack[-1] = (state, nxt_i + 1)
                t = self.trans[state][nxt_i]
                if t == REJECT:
                    continue
                if color[t] == 1:
                    return False
                if color[t] == 0:
                    color[t] = 1
                    stack.append((t, 0))
            else:
                color[state] = 2
                stack.pop()
        return True


def build_automaton(small: SmallRootSet, shortlex: bool = False) -> WordAutomaton:
    rank = small.roots[0].coords.__len__()
    return WordAutomaton(small, rank, shortlex)


@dataclass(frozen=True)
class Element:
    """A group element, stored as its ShortLex-least reduced word."""

    word: tuple

    def __len__(self):
        return len(self.word)

    def __str__(self):
        return "e" if not self.word else ".".join(str(i) for i in self.word)


IDENTITY = Element(())


class CoxeterSystem:
    """A Coxeter system (W, S) with all derived machinery.

    Matrix columns: an element matrix is stored as a tuple of columns,
    each column a tuple of QuadExt; column j is w(alpha_j).
    """

    def __init__(self, matrix: CoxeterMatrix, name: str = "",
                 closure_bound: int = 20000):
        self.matrix = matrix
        self.name = name or "custom"
        self.rank = matrix.rank
        self.form = build_form(matrix)
        self.small = small_roots(self.form, bound=closure_bound)
        self.simple = tuple(
            tuple(QONE if j == i else QZERO for j in range(self.rank))
            for i in range(self.rank)
        )
        self.identity_matrix = tuple(self.simple)

    @cached_property
    def automaton(self) -> WordAutomaton:
        return build_automaton(self.small, shortlex=False)

    @cached_property
    def shortlex_automaton(self) -> WordAutomaton:
        return build_automaton(self.small, shortlex=True)

    def is_spherical(self) -> bool:
        return self.automaton.language_is_finite()

    # -- root-level action ----------------------------------------------

    def reflect(self, i: int, v: Sequence[QuadExt]) -> tuple:
        """s_i(v) = v - 2B(alpha_i, v) alpha_i."""
        row = self.form.gram2[i]
        f2 = QZERO
        for j, vj in enumerate(v):
            if not vj.is_zero():
                f2 = f2 + row[j] * vj
        out = list(v)
        out[i] = out[i] - f2
        return tuple(out)

    def act(self, word: Sequence[int], v: Sequence[QuadExt]) -> tuple:
        """w(v) for w given by ``word`` (leftmost letter applied last)."""
        out = tuple(v)
        for letter in reversed(word):
            out = self.reflect(letter, out)
        return out

    def act_inv(self, word: Sequence[int], v: Sequence[QuadExt]) -> tuple:
        """w^-1(v): letters applied left to right."""
        out = tuple(v)
        for letter in word:
            out = self.reflect(letter, out)
        return out

    # -- matrix-level action ---------------------------------------------

    def mat_mul_gen_right(self, cols: tuple, i: int) -> tuple:
        """M -> M * S_i (one rank-one column update)."""
        ci = cols[i]
        row = self.form.gram2[i]
        out = []
        for j, cj in enumerate(cols):
            f = row[j]
            if f.is_zero():
                out.append(cj)
            else:
                out.append(tuple(cj[r] - f * ci[r] for r in range(self.rank)))
        return tuple(out)

    def mat_mul_gen_left(self, cols: tuple, i: int) -> tuple:
        """M -> S_i * M (reflect every column)."""
        return tuple(self.reflect(i, c) for c in cols)

    def word_to_matrices(self, word: Sequence[int]) -> tuple:
        """(M(w), M(w^-1)) for the element of ``word``."""
        m = self.identity_matrix
        minv = self.identity_matrix
        for letter in word:
            m = self.mat_mul_gen_right(m, letter)
            minv = self.mat_mul_gen_left(minv, letter)
        return m, minv

    @staticmethod
    def column_sign(col: Sequence[QuadExt]) -> int:
        """Sign of a +-root given by coordinates (all same sign)."""
        for x in col:
            s = x.sign()
            if s != 0:
                return s
        raise InternalError("zero column in a root matrix")

    def matrix_to_word(self, minv: tuple) -> tuple:
        """ShortLex normal form from M(w^-1), by greedy minimal descent."""
        word = []
        guard = 0
        while minv != self.identity_matrix:
            for i in range(self.rank):
                if self.column_sign(minv[i]) < 0:  # w^-1(alpha_i) < 0
                    word.append(i)
                    minv = self.mat_mul_gen_right(minv, i)
                    break
            else:
                raise InternalError("non-identity matrix with no descent")
            guard += 1
            if guard > 10_000_000:
                raise InternalError("descent walk failed to terminate")
        return tuple(word)

    # -- element operations ----------------------------------------------

    def normal_form(self, word: Sequence[int]) -> Element:
        """ShortLex-least reduced word of the element of ``word``."""
        for letter in word:
            if not 0 <= letter < self.rank:
                raise ConfigError(f"generator index {letter} out of range")
        _, minv = self.word_to_matrices(word)
        return Element(self.matrix_to_word(minv))

    def multiply(self, u: Element, v: Element) -> Element:
        return self.normal_form(u.word + v.word)

    def inverse(self, u: Element) -> Element:
        return self.normal_form(tuple(reversed(u.word)))

    def length(self, u: Element) -> int:
        return len(u.word)

    def left_descents(self, w: Element) -> set:
        """{ i : length(s_i w) < length(w) }."""
        _, minv = self.word_to_matrices(w.word)
        return {
            i for i in range(self.rank)
            if self.column_sign(minv[i]) < 0
        }

    def element(self, word: Sequence[int]) -> Element:
        return self.normal_form(word)

    # -- enumeration -----------------------------------------------------

    def ball(self, radius: int) -> list:
        """All elements of length <= radius, as ShortLex words."""
        return list(self.shortlex_automaton.words(radius))

    def inversion_roots(self, word: Sequence[int]) -> list:
        """Roots of the walls crossed by the gallery e -> w along ``word``.

        The i-th entry is (s_{j1}..s_{j_{i-1}})(alpha_{j_i}); for a
        reduced word these are exactly the walls separating e from w.
        """
        roots = []
        m = self.identity_matrix
        for letter in word:
            roots.append(m[letter])
            m = self.mat_mul_gen_right(m, letter)
        return roots


# -- named systems and the system file format ---------------------------

_NAMED: dict = {
    "infinite-dihedral": ((1, INF), (INF, 1)),
    "A2": ((1, 3), (3, 1)),
    "B2": ((1, 4), (4, 1)),
    "A3": ((1, 3, 2), (3, 1, 3), (2, 3, 1)),
    "affine-A2": ((1, 3, 3), (3, 1, 3), (3, 3, 1)),
    "pentagon": tuple(
        tuple(1 if i == j else (2 if (i - j) % 5 in (1, 4) else INF)
              for j in range(5))
        for i in range(5)
    ),
    "triangle-334": ((1, 3, 3), (3, 1, 4), (3, 4, 1)),
}

NAMED_SYSTEMS = tuple(sorted(_NAMED))


def named_system(name: str) -> CoxeterSystem:
    try:
        entries = _NAMED[name]
    except KeyError:
        raise ConfigError(
            f"unknown system {name!r}; known: {', '.join(NAMED_SYSTEMS)}")
    return CoxeterSystem(CoxeterMatrix(entries), name=name)


def parse_system_file(text: str, name: str = "file") -> CoxeterSystem:
    """Parse the plain-text system format.

    First non-comment line: ``rank=<k>``.  Then the strict upper triangle
    of the Coxeter matrix, one row per line (row i lists m[i][i+1..k-1]),
    with ``inf`` for the infinite label.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].replace(" ", "").startswith("rank="):
        raise ConfigError("system file must start with 'rank=<k>'")
    try:
        rank = int(lines[0].split("=", 1)[1])
    except ValueError:
        raise ConfigError("invalid rank in system file")
    if rank < 1:
        raise ConfigError("rank must be at least 1")
    rows = lines[1:]
    if len(rows) != max(rank - 1, 0):
        raise ConfigError(
            f"expected {rank - 1} triangle rows, got {len(rows)}")
    m = [[1 if i == j else None for j in range(rank)] for i in range(rank)]
    for i, row in enumerate(rows):
        parts = row.split()
        if len(parts) != rank - 1 - i:
            raise ConfigError(f"row {i} must list {rank - 1 - i} labels")
        for off, tok in enumerate(parts):
            j = i + 1 + off
            if tok.lower() == "inf":
                label = INF
            else:
                try:
                    label = int(tok)
                except ValueError:
                    raise ConfigError(f"bad label {tok!r} in system file")
            m[i][j] = m[j][i] = label
    entries = tuple(tuple(row) for row in m)
    return CoxeterSystem(CoxeterMatrix(entries), name=name)
