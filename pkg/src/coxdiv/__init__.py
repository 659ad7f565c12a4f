"""Wall combinatorics of Coxeter complexes and exact divergence of
Cayley-graph oracles.

The package has three layers:

* ``coxeter`` / ``scalars``: exact Coxeter systems over Q(sqrt2, sqrt3),
  small roots, reduced-word automata, ShortLex normal forms;
* ``walls`` : separating walls, parallelism, pencil and parallel-wall
  scans;
* ``oracles`` / ``divergence``: pluggable Cayley-graph oracles (grid,
  free, Coxeter, SL2 over Laurent polynomials) and the certified
  divergence engine.
"""

__version__ = "0.1.0"

from .coxeter import (
    CoxeterMatrix,
    CoxeterSystem,
    Element,
    IDENTITY,
    INF,
    named_system,
    parse_system_file,
    small_roots,
)
from .divergence import (
    DISCONNECTED,
    DetourResult,
    DivergenceQuery,
    DivergenceReport,
    HORIZON_EXCEEDED,
    PATH,
    UNBOUNDED,
    bfs_ball,
    detour_distance,
    divergence_function,
    pair_divergence,
)
from .errors import (
    BudgetError,
    ConfigError,
    CoxdivError,
    InternalError,
    MemoryBudgetError,
    NonTransitiveUnsupportedError,
    SameWallError,
    SpanBudgetError,
    SphericalSystemError,
    TooLargeError,
)
from .laurent import LaurentPoly, SLMatrix, laurent_mul, sl_mul
from .oracles import (
    GraphOracle,
    ORACLE_REGISTRY,
    coxeter_oracle,
    free_oracle,
    grid_oracle,
    make_oracle,
    sl2_oracle,
)
from .scalars import QuadExt
from .walls import (
    PWTReport,
    PencilReport,
    Wall,
    lemma1_scan,
    max_parallel_family,
    pwt_scan,
    separating_walls,
    wall_distance,
    wall_side,
    walls_parallel,
)

__all__ = [
    "__version__",
    "BudgetError", "ConfigError", "CoxdivError", "CoxeterMatrix",
    "CoxeterSystem", "DISCONNECTED", "DetourResult", "DivergenceQuery",
    "DivergenceReport", "Element", "GraphOracle", "HORIZON_EXCEEDED",
    "IDENTITY", "INF", "InternalError", "LaurentPoly", "MemoryBudgetError",
    "NonTransitiveUnsupportedError", "ORACLE_REGISTRY", "PATH", "PWTReport",
    "PencilReport", "QuadExt", "SLMatrix", "SameWallError", "SpanBudgetError",
    "SphericalSystemError", "TooLargeError", "UNBOUNDED", "Wall",
    "bfs_ball", "coxeter_oracle", "detour_distance", "divergence_function",
    "free_oracle", "grid_oracle", "laurent_mul", "lemma1_scan",
    "make_oracle", "max_parallel_family", "named_system", "pair_divergence",
    "parse_system_file", "pwt_scan", "separating_walls", "sl2_oracle",
    "sl_mul", "small_roots", "wall_distance", "wall_side", "walls_parallel",
]
