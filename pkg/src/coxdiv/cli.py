"""Batch command-line front end.

Four subcommands: ``divergence``, ``pencil``, ``pwt``,
``automaton-stats``.  Each run writes a CSV report plus a JSON manifest
(and optionally an SVG chart for divergence) into the output directory.

Options can come from an INI-style config file (``--config``); explicit
flags override config values.  Exit codes: 0 success, 2 configuration
error, 3 budget exceeded, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import configparser
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .coxeter import CoxeterSystem, named_system, parse_system_file
from .divergence import DivergenceQuery, divergence_function, max_vertex_budget
from .errors import (
    BudgetError,
    ConfigError,
    CoxdivError,
    InternalError,
    TooLargeError,
)
from .oracles import make_oracle
from .reports import (
    _csv_text,
    divergence_csv,
    emit_plot,
    pencil_csv,
    pwt_csv,
    run_manifest,
)
from .walls import lemma1_scan, pwt_scan

COMMANDS = ("divergence", "pencil", "pwt", "automaton-stats")


def _rational(text: str, name: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{name} must be an exact rational like 1/2: {exc}")


def _load_config(path: str) -> dict:
    """Flatten an INI config into {section.key: value} strings."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    flat = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            flat[f"{section}.{key}"] = value
    return flat


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxdiv",
        description="Coxeter wall scans and exact divergence computation")
    sub = parser.add_subparsers(dest="command")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file; flags override it")
    common.add_argument("--output-dir", help="directory for report files")
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--max-vertices", type=int, default=None,
                        help="vertex budget override (also via COXDIV_MAX_VERTICES)")

    div = sub.add_parser("divergence", parents=[common],
                         help="divergence function over a graph oracle")
    div.add_argument("--oracle", choices=("grid", "free", "coxeter", "sl2"))
    div.add_argument("--d", type=int, help="grid dimension")
    div.add_argument("--rank", type=int, help="free group rank")
    div.add_argument("--q", type=int, help="field size for sl2")
    div.add_argument("--degree-bound", type=int)
    div.add_argument("--system", help="Coxeter system name or file")
    div.add_argument("--n", type=int)
    div.add_argument("--delta")
    div.add_argument("--lambda", dest="lam")
    div.add_argument("--horizon-factor")
    div.add_argument("--mode", choices=("exhaustive", "sampled"))
    div.add_argument("--pair-count", type=int)
    div.add_argument("--seed", type=int)
    div.add_argument("--plot", action="store_true", default=None,
                     help="emit the SVG chart")

    for name, fn_help in (("pencil", "pencil (pairwise-parallel wall) scan"),
                          ("pwt", "parallel-wall-theorem scan")):
        p = sub.add_parser(name, parents=[common], help=fn_help)
        p.add_argument("--system", help="Coxeter system name or file")
        p.add_argument("--radius", type=int)
        if name == "pwt":
            p.add_argument("--all-walls", action="store_true", default=None)

    auto = sub.add_parser("automaton-stats", parents=[common],
                          help="small-root automaton statistics")
    auto.add_argument("--system", help="Coxeter system name or file")
    return parser


def _merged(args: argparse.Namespace, section: str) -> dict:
    """Config-file values overlaid by explicit CLI flags."""
    values = {}
    if args.config:
        flat = _load_config(args.config)
        for full_key, value in flat.items():
            sec, _, key = full_key.partition(".")
            if sec in ("run", section):
                key = key.replace("-", "_")
                values["lam" if key == "lambda" else key] = value
    for key, value in vars(args).items():
        if value is not None and key not in ("config",):
            values[key] = value
    return values


def _resolve_system(values: dict) -> CoxeterSystem:
    name = values.get("system")
    if not name:
        raise ConfigError("a Coxeter system is required (--system)")
    path = Path(str(name))
    if path.suffix or path.exists():
        return parse_system_file(path.read_text())
    return named_system(str(name))


def _resolve_oracle(values: dict):
    kind = values.get("oracle")
    if not kind:
        raise ConfigError("an oracle is required (--oracle)")
    params = {}
    if kind == "grid":
        params["d"] = int(values.get("d", 2))
    elif kind == "free":
        params["rank"] = int(values.get("rank", 2))
    elif kind == "sl2":
        params["q"] = int(values.get("q", 2))
        if values.get("degree_bound") is not None:
            params["degree_bound"] = int(values["degree_bound"])
    elif kind == "coxeter":
        params["system"] = _resolve_system(values)
    return make_oracle(str(kind), **params)


def _write_outputs(out_dir: Optional[str], files: dict, config_echo: dict,
                   runtime: float, seed: Optional[int]) -> None:
    encoded = {name: text.encode() for name, text in files.items()}
    manifest = run_manifest(config_echo, encoded, runtime, seed)
    if out_dir is None:
        for name, text in files.items():
            if name.endswith(".csv"):
                sys.stdout.write(text)
        return
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    for name, data in encoded.items():
        (directory / name).write_bytes(data)
    (directory / "manifest.json").write_text(manifest)


def _run_divergence(args: argparse.Namespace) -> None:
    values = _merged(args, "divergence")
    oracle = _resolve_oracle(values)
    n = int(values.get("n") or 0)
    if n < 1:
        raise ConfigError("n must be an integer >= 1 (--n)")
    query = DivergenceQuery(
        n=n,
        delta=_rational(str(values.get("delta", "1/2")), "delta"),
        lam=_rational(str(values.get("lam", "0")), "lambda"),
        horizon_factor=_rational(str(values.get("horizon_factor", "8")),
                                 "horizon_factor"),
        mode=str(values.get("mode", "exhaustive")),
        pair_count=int(values.get("pair_count", 0) or 0),
        seed=int(values.get("seed", 0) or 0),
    )
    workers = int(values.get("workers", 1) or 1)
    budget = values.get("max_vertices")
    t0 = time.monotonic()
    report = divergence_function(
        oracle, query, workers=workers,
        max_vertices=max_vertex_budget(int(budget) if budget else None))
    files = {"divergence.csv": divergence_csv(report)}
    want_plot = str(values.get("plot", "")).lower() in ("1", "true", "yes")
    if want_plot:
        files["divergence.svg"] = emit_plot(report)
    echo = {k: str(v) for k, v in sorted(values.items())
            if k not in ("workers", "output_dir")}
    _write_outputs(values.get("output_dir"), files, echo,
                   time.monotonic() - t0,
                   query.seed if query.mode == "sampled" else None)


def _run_pencil(args: argparse.Namespace) -> None:
    values = _merged(args, "pencil")
    system = _resolve_system(values)
    radius = int(values.get("radius") or 0)
    workers = int(values.get("workers", 1) or 1)
    t0 = time.monotonic()
    report = lemma1_scan(system, radius, workers=workers)
    files = {"pencil.csv": pencil_csv(report)}
    echo = {k: str(v) for k, v in sorted(values.items())
            if k not in ("workers", "output_dir")}
    echo["c_hat"] = str(report.c_hat)
    _write_outputs(values.get("output_dir"), files, echo,
                   time.monotonic() - t0, None)
    sys.stderr.write(f"C_hat = {report.c_hat}\n")


def _run_pwt(args: argparse.Namespace) -> None:
    values = _merged(args, "pwt")
    system = _resolve_system(values)
    radius = int(values.get("radius") or 0)
    workers = int(values.get("workers", 1) or 1)
    all_walls = str(values.get("all_walls", "")).lower() in ("1", "true", "yes")
    t0 = time.monotonic()
    report = pwt_scan(system, radius, workers=workers, all_walls=all_walls)
    files = {"pwt.csv": pwt_csv(report)}
    echo = {k: str(v) for k, v in sorted(values.items())
            if k not in ("workers", "output_dir")}
    _write_outputs(values.get("output_dir"), files, echo,
                   time.monotonic() - t0, None)


def _run_automaton_stats(args: argparse.Namespace) -> None:
    values = _merged(args, "automaton-stats")
    system = _resolve_system(values)
    t0 = time.monotonic()
    plain = system.automaton
    shortlex = system.shortlex_automaton
    finite = shortlex.language_is_finite()
    order = ""
    if finite:
        bound = 4
        while True:
            counts = shortlex.count_words(bound)
            if counts[-1] == 0:
                order = sum(counts)
                break
            bound *= 2
    records = [(
        system.name, system.rank, len(system.small.roots),
        len(plain.states), len(shortlex.states),
        1 if finite else 0,
        order,
    )]
    files = {"automaton.csv": _csv_text(
        ("system", "rank", "small_roots", "automaton_states",
         "shortlex_states", "finite_language", "group_order"), records)}
    echo = {k: str(v) for k, v in sorted(values.items())
            if k not in ("workers", "output_dir")}
    _write_outputs(values.get("output_dir"), files, echo,
                   time.monotonic() - t0, None)


_DISPATCH = {
    "divergence": _run_divergence,
    "pencil": _run_pencil,
    "pwt": _run_pwt,
    "automaton-stats": _run_automaton_stats,
}


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        _DISPATCH[args.command](args)
    except (BudgetError, TooLargeError) as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return 3
    except InternalError as exc:
        sys.stderr.write(f"internal invariant violation: {exc}\n")
        return 4
    except CoxdivError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
