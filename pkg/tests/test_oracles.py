"""Graph oracle contract: symmetry, determinism, keys, renderings."""

from collections import deque

import pytest

from coxdiv.coxeter import named_system
from coxdiv.errors import ConfigError, SpanBudgetError
from coxdiv.oracles import (
    ORACLE_REGISTRY,
    coxeter_oracle,
    free_oracle,
    grid_oracle,
    make_oracle,
    sl2_oracle,
)

ORACLES = [
    ("grid1", lambda: grid_oracle(1), 4),
    ("grid2", lambda: grid_oracle(2), 4),
    ("grid3", lambda: grid_oracle(3), 3),
    ("free2", lambda: free_oracle(2), 4),
    ("free3", lambda: free_oracle(3), 3),
    ("cox-dihedral", lambda: coxeter_oracle(named_system("infinite-dihedral")), 6),
    ("cox-334", lambda: coxeter_oracle(named_system("triangle-334")), 4),
    ("sl2-q2", lambda: sl2_oracle(2), 3),
    ("sl2-q3", lambda: sl2_oracle(3), 2),
]


def independent_ball(oracle, radius):
    """Plain dict BFS keyed by canonical_key; no engine code involved."""
    base = oracle.basepoint
    dist = {oracle.canonical_key(base): 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        d = dist[oracle.canonical_key(v)]
        if d == radius:
            continue
        for w in oracle.neighbors(v):
            k = oracle.canonical_key(w)
            if k not in dist:
                dist[k] = d + 1
                queue.append(w)
    return dist


@pytest.mark.parametrize("name,factory,radius", ORACLES,
                         ids=[t[0] for t in ORACLES])
def test_neighbor_symmetry(name, factory, radius):
    oracle = factory()
    verts = [oracle.basepoint]
    seen = {oracle.canonical_key(oracle.basepoint)}
    for _ in range(radius):
        nxt = []
        for v in verts:
            for w in oracle.neighbors(v):
                k = oracle.canonical_key(w)
                if k not in seen:
                    seen.add(k)
                    nxt.append(w)
        verts = nxt
    # u ~ v implies v ~ u, checked through canonical keys
    frontier = [oracle.basepoint]
    checked = set()
    for _ in range(radius):
        nxt = []
        for v in frontier:
            kv = oracle.canonical_key(v)
            for w in oracle.neighbors(v):
                kw = oracle.canonical_key(w)
                if (kv, kw) in checked:
                    continue
                checked.add((kv, kw))
                back = {oracle.canonical_key(x) for x in oracle.neighbors(w)}
                assert kv in back
                if kw not in {oracle.canonical_key(x) for x in frontier}:
                    nxt.append(w)
        frontier = nxt


@pytest.mark.parametrize("name,factory,radius", ORACLES,
                         ids=[t[0] for t in ORACLES])
def test_neighbors_deterministic(name, factory, radius):
    a, b = factory(), factory()
    va, vb = a.basepoint, b.basepoint
    for _ in range(radius):
        na, nb = a.neighbors(va), b.neighbors(vb)
        assert [a.canonical_key(x) for x in na] == \
            [b.canonical_key(x) for x in nb]
        va, vb = na[-1], nb[-1]


@pytest.mark.parametrize("name,factory,radius", ORACLES,
                         ids=[t[0] for t in ORACLES])
def test_render_parse_round_trip(name, factory, radius):
    oracle = factory()
    verts = [oracle.basepoint]
    seen = {oracle.canonical_key(oracle.basepoint)}
    for _ in range(radius):
        nxt = []
        for v in verts:
            for w in oracle.neighbors(v):
                k = oracle.canonical_key(w)
                if k not in seen:
                    seen.add(k)
                    nxt.append(w)
        verts = nxt
        for v in verts:
            back = oracle.parse(oracle.render(v))
            assert oracle.canonical_key(back) == oracle.canonical_key(v)


def test_key_injective_on_small_balls():
    for name, factory, radius in ORACLES:
        oracle = factory()
        dist = independent_ball(oracle, radius)
        renders = set()
        # render must also separate vertices (keys already do by construction)
        verts = [oracle.basepoint]
        seen = {oracle.canonical_key(oracle.basepoint)}
        renders.add(oracle.render(oracle.basepoint))
        for _ in range(radius):
            nxt = []
            for v in verts:
                for w in oracle.neighbors(v):
                    k = oracle.canonical_key(w)
                    if k not in seen:
                        seen.add(k)
                        renders.add(oracle.render(w))
                        nxt.append(w)
            verts = nxt
        assert len(renders) == len(dist), name


def test_ball_sizes_known():
    assert len(independent_ball(grid_oracle(1), 5)) == 11
    assert len(independent_ball(grid_oracle(2), 2)) == 13
    # free rank 2: 1 + 4 * (3^r - 1) / 2 vertices in the r-ball
    assert len(independent_ball(free_oracle(2), 3)) == 1 + 2 * (3 ** 3 - 1)
    # dihedral Cayley graph is a line: 2r + 1
    orc = coxeter_oracle(named_system("infinite-dihedral"))
    assert len(independent_ball(orc, 6)) == 13
    # affine A2 sphere sizes are 3k
    orc = coxeter_oracle(named_system("affine-A2"))
    assert len(independent_ball(orc, 4)) == 1 + 3 + 6 + 9 + 12


def test_sl2_generator_count():
    assert len(sl2_oracle(2).generators) == 6
    assert len(sl2_oracle(3).generators) == 12
    # each generator's inverse is also a generator
    for q in (2, 3):
        oracle = sl2_oracle(q)
        keys = {g.entries for g in oracle.generators}
        base = oracle.basepoint
        for g in oracle.generators:
            # the inverse of E_ij(x) is E_ij(-x)
            from coxdiv.laurent import sl_mul
            inv = [h for h in oracle.generators
                   if sl_mul(g, h) == base]
            assert len(inv) == 1
    assert keys  # sanity


def test_sl2_regularity():
    oracle = sl2_oracle(2)
    dist = independent_ball(oracle, 3)
    assert len(oracle.neighbors(oracle.basepoint)) == 6
    assert len(dist) > 6


def test_sl2_span_budget():
    oracle = sl2_oracle(2, degree_bound=2)
    with pytest.raises(SpanBudgetError):
        independent_ball(oracle, 8)


def test_grid_parse_errors():
    oracle = grid_oracle(2)
    assert oracle.parse("(3,-1)") == (3, -1)
    with pytest.raises(ConfigError):
        oracle.parse("(1,2,3)")


def test_free_parse_errors():
    oracle = free_oracle(2)
    assert oracle.parse("abA") == (1, 2, -1)
    assert oracle.parse("e") == ()
    with pytest.raises(ConfigError):
        oracle.parse("xyz")


def test_registry_and_factory():
    kinds = {entry.name for entry in ORACLE_REGISTRY}
    assert kinds == {"grid", "free", "coxeter", "sl2"}
    assert all(entry.vertex_transitive for entry in ORACLE_REGISTRY)
    assert make_oracle("grid", d=3).d == 3
    assert make_oracle("free", rank=4).rank == 4
    assert make_oracle("coxeter", system="affine-A2").system.rank == 3
    assert make_oracle("sl2", q=3).q == 3
    with pytest.raises(ConfigError):
        make_oracle("hyperbolic")
    with pytest.raises(ConfigError):
        make_oracle("coxeter")
    with pytest.raises(ConfigError):
        grid_oracle(0)
    with pytest.raises(ConfigError):
        free_oracle(1)
