"""Command-line front end and benchmark harness.

Six subcommands drive the package end to end::

    python3 -m qcfd classical  [key=value ...]   # cavity run, GS pressure
    python3 -m qcfd hybrid     [key=value ...]   # cavity run, emulated solver
    python3 -m qcfd decompose  [key=value ...]   # decomposition timing table
    python3 -m qcfd hhl        [key=value ...]   # solver study on files
    python3 -m qcfd sample     [key=value ...]   # export PC systems
    python3 -m qcfd bench      [key=value ...]   # overhead-vs-CFD table

Settings come from an optional flat key=value config file plus overrides
on the command line (overrides win).  Unknown keys are rejected.  Every
run writes its resolved settings to ``manifest.txt`` in the output
directory; CSV outputs are deterministic given a manifest (timing
columns excepted).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__
from .cavity.simple import HISTORY_COLUMNS, SimpleResult, run_simple
from .config import CaseConfig
from .errors import (ConfigError, IoFormatError, QcfdError, SolverError)
from .hhl.solver import HhlConfig, hhl_solve
from .hybrid import HhlPcSolver, compare_runs, run_hybrid, sample_systems
from .io import (read_matrix_market, read_vector, render_table, write_csv,
                 write_matrix_market, write_vector)
from .lcu.clusters import symmetrize
from .lcu.decompose import (decompose_hadamard, decompose_trace, reevaluate,
                            save_template)

__all__ = ["main"]

LCU_SUMMARY_COLUMNS = ("mesh", "N", "clusters", "candidates", "nonzero",
                       "decomp_seconds", "reeval_seconds")
HHL_DIAGNOSTIC_COLUMNS = ("precision", "n_clock", "trotter_r", "C",
                          "prune_limit", "rotations", "E", "fidelity", "l2",
                          "rms", "seconds")
BENCH_COLUMNS = ("mesh", "N", "outer_iterations", "cfd_seconds",
                 "decomp_seconds", "reeval_seconds", "lcu_seconds",
                 "overhead_ratio")
_DESK_MESHES = (5, 9, 17, 33, 65)


# -- settings -------------------------------------------------------------

def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(",", " ").split())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.replace(",", " ").split())


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(t for t in text.replace(",", " ").split())


_CASE_KEYS: dict[str, tuple[Callable, str]] = {
    "nodes": (int, "5"),
    "density": (float, "1.0"),
    "viscosity": (float, "0.01"),
    "lid_velocity": (float, "1.0"),
    "outer_max": (int, "50000"),
    "outer_tol": (float, "1e-12"),
    "gs_tol": (float, "1e-13"),
    "gs_max": (int, "1000000"),
    "relax_velocity": (float, "0.7"),
    "relax_pressure": (float, "0.3"),
}

_HHL_KEYS: dict[str, tuple[Callable, str]] = {
    "precision": (str, "3.4"),
    "trotter_steps": (int, "64"),
    "rotation_constant": (str, "auto"),
    "prune_limit": (float, "0.0"),
    "coefficient_limit": (float, "0.0"),
    "evolution": (str, "trotter"),
}

_SCHEMAS: dict[str, dict[str, tuple[Callable, str]]] = {
    "classical": {**_CASE_KEYS},
    "hybrid": {**_CASE_KEYS, **_HHL_KEYS,
               "filter_limit": (float, "0.0"),
               "gs_shadow": (_bool, "false"),
               "compare": (_bool, "true")},
    "decompose": {"meshes": (_int_list, "5,9,17"),
                  "methods": (_str_list, "hadamard,trace"),
                  "save_templates": (_bool, "false")},
    "hhl": {"matrix": (str, ""), "rhs": (str, ""),
            "precisions": (_str_list, "3.3,3.4,3.5"),
            "prune_limits": (_float_list, "0.0"),
            "coefficient_limits": (_float_list, "0.0"),
            "trotter_steps": (int, "64"),
            "rotation_constant": (str, "auto"),
            "evolution": (str, "trotter")},
    "sample": {**_CASE_KEYS, "iterations": (_int_list, "10,100")},
    "bench": {**_CASE_KEYS, "meshes": (_int_list, "5,9,17,33")},
}


def resolve_settings(subcommand: str, config_path: Optional[str],
                     overrides: list[str]) -> dict:
    """File settings, then overrides, against the subcommand's schema."""
    schema = _SCHEMAS[subcommand]
    pairs: dict[str, str] = {key: default for key, (_, default)
                             in schema.items()}
    if config_path:
        try:
            lines = Path(config_path).read_text().splitlines()
        except OSError as exc:
            raise IoFormatError(f"cannot read config {config_path}: {exc}"
                                ) from exc
        for raw in lines:
            line = raw.split("#")[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"config line {raw!r} is not key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in schema:
                raise ConfigError(f"unknown setting {key!r} for "
                                  f"'{subcommand}'")
            pairs[key] = value
    for raw in overrides:
        if "=" not in raw:
            raise ConfigError(f"override {raw!r} is not key=value")
        key, value = (part.strip() for part in raw.split("=", 1))
        if key not in schema:
            raise ConfigError(f"unknown setting {key!r} for '{subcommand}'")
        pairs[key] = value
    resolved = {}
    for key, text in pairs.items():
        parse = schema[key][0]
        try:
            resolved[key] = parse(text)
        except QcfdError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {text!r} ({exc})"
                              ) from exc
    return resolved


def _case_config(settings: dict, **overrides) -> CaseConfig:
    kwargs = dict(
        nodes_per_side=settings["nodes"],
        density=settings["density"],
        viscosity=settings["viscosity"],
        lid_velocity=settings["lid_velocity"],
        outer_max=settings["outer_max"],
        outer_tol=settings["outer_tol"],
        gs_tol=settings["gs_tol"],
        gs_max=settings["gs_max"],
        relax_velocity=settings["relax_velocity"],
        relax_pressure=settings["relax_pressure"],
    )
    kwargs.update(overrides)
    return CaseConfig(**kwargs)


def _rotation_constant(text: str) -> Optional[float]:
    if text.strip().lower() in ("auto", "default", ""):
        return None
    return float(text)


def _hhl_config(settings: dict) -> HhlConfig:
    return HhlConfig(
        precision=settings["precision"],
        trotter_steps=settings["trotter_steps"],
        rotation_constant=_rotation_constant(settings["rotation_constant"]),
        prune_limit=settings["prune_limit"],
        coefficient_limit=settings["coefficient_limit"],
        evolution=settings["evolution"],
    )


def _write_manifest(out: Path, subcommand: str, settings: dict) -> None:
    lines = [f"subcommand={subcommand}", f"version={__version__}"]
    lines += [f"{key}={settings[key]}" for key in sorted(settings)]
    (out / "manifest.txt").write_text("\n".join(lines) + "\n")


def _write_history(path: Path, result: SimpleResult) -> None:
    write_csv(path, HISTORY_COLUMNS,
              [record.as_row() for record in result.history])


def _emit(out: Path, name: str, header, rows) -> None:
    write_csv(out / f"{name}.csv", header, rows)
    table = render_table(header, rows)
    (out / f"{name}.txt").write_text(table + "\n")
    print(table)


# -- subcommands ----------------------------------------------------------

def cmd_classical(settings: dict, out: Path) -> None:
    result = run_simple(_case_config(settings))
    _write_history(out / "history.csv", result)
    summary = (f"converged={result.converged} iterations={result.iterations} "
               f"seconds={result.seconds:.3f}")
    (out / "summary.txt").write_text(summary + "\n")
    print(summary)


def cmd_hybrid(settings: dict, out: Path) -> None:
    config = _case_config(settings)
    hybrid_result, solver = run_hybrid(
        config, _hhl_config(settings),
        filter_limit=settings["filter_limit"],
        gs_shadow=settings["gs_shadow"])
    _write_history(out / "hybrid_history.csv", hybrid_result)
    write_csv(out / "hhl_diagnostics.csv",
              ("iter", "rotations", "E", "fidelity"),
              [(it, rot, e, "" if fid is None else fid)
               for it, rot, e, fid in solver.diagnostics])
    lines = [
        f"converged={hybrid_result.converged} "
        f"iterations={hybrid_result.iterations} "
        f"seconds={hybrid_result.seconds:.3f}",
        f"template: decomposed {solver.decompose_count}x, re-evaluated "
        f"{solver.reevaluate_count}x, skipped {solver.skip_count} "
        f"near-zero rhs",
    ]
    if settings["compare"]:
        classical_result = run_simple(config)
        _write_history(out / "classical_history.csv", classical_result)
        comparison = compare_runs(classical_result, hybrid_result)
        write_csv(out / "comparison.csv",
                  ("iter", "classical_dp", "hybrid_dp",
                   "classical_continuity", "hybrid_continuity"),
                  zip(comparison.iterations, comparison.classical_dp,
                      comparison.hybrid_dp, comparison.classical_continuity,
                      comparison.hybrid_continuity))
        lines.append(f"classical iterations={classical_result.iterations}; "
                     f"hybrid stagnated={comparison.hybrid_stagnated}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))


def _pc_system_at_iteration_10(nodes: int):
    config = CaseConfig(nodes_per_side=nodes, outer_max=10)
    sample = sample_systems(config, (10,))[10]
    return sample.matrix, sample.rhs, sample.solution


def cmd_decompose(settings: dict, out: Path) -> None:
    meshes = settings["meshes"]
    methods = settings["methods"]
    if not meshes or not methods:
        raise ConfigError("decompose needs at least one mesh and one method")
    bad = [m for m in meshes if m not in _DESK_MESHES]
    if bad:
        raise ConfigError(f"unsupported mesh sizes {bad}; "
                          f"choose from {_DESK_MESHES}")
    unknown = [m for m in methods if m not in ("hadamard", "trace")]
    if unknown:
        raise ConfigError(f"unknown methods {unknown}; "
                          "choose from hadamard, trace")
    if "trace" in methods and 65 in meshes:
        raise ConfigError(
            "trace decomposition at mesh 65 is refused: the per-string scan "
            "over an 8192-dimensional embedding is hours of work for numbers "
            "the cluster route produces identically; run mesh 65 with "
            "method=hadamard")
    per_method: dict[str, list] = {m: [] for m in methods}
    for nodes in meshes:
        matrix, _, _ = _pc_system_at_iteration_10(nodes)
        embedded = symmetrize(matrix)
        for method in methods:
            t0 = time.perf_counter()
            if method == "hadamard":
                template = decompose_hadamard(embedded)
            else:
                template = decompose_trace(embedded, scan="auto")
            decomp_seconds = time.perf_counter() - t0
            t0 = time.perf_counter()
            reevaluate(template, embedded)
            reeval_seconds = time.perf_counter() - t0
            per_method[method].append(
                (nodes, embedded.n, template.cluster_count,
                 template.candidate_count, template.nonzero_count,
                 round(decomp_seconds, 6), round(reeval_seconds, 6)))
            if settings["save_templates"] and method == "hadamard":
                save_template(template, out / f"template_mesh{nodes}.npz")
    for method, rows in per_method.items():
        print(f"[{method}]")
        _emit(out, f"lcu_summary_{method}", LCU_SUMMARY_COLUMNS, rows)


def cmd_hhl(settings: dict, out: Path) -> None:
    if not settings["matrix"] or not settings["rhs"]:
        raise ConfigError("hhl needs matrix=<file> and rhs=<file>")
    matrix = read_matrix_market(settings["matrix"])
    rhs = read_vector(settings["rhs"])
    if rhs.size != matrix.n:
        raise ConfigError("matrix and rhs sizes differ")
    try:
        reference = np.linalg.solve(matrix.to_dense(), rhs)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"reference solve failed: {exc}") from exc
    constant = _rotation_constant(settings["rotation_constant"])
    for coeff_limit in settings["coefficient_limits"]:
        rows = []
        for precision in settings["precisions"]:
            for prune in settings["prune_limits"]:
                config = HhlConfig(
                    precision=precision,
                    trotter_steps=settings["trotter_steps"],
                    rotation_constant=constant,
                    prune_limit=prune,
                    coefficient_limit=coeff_limit,
                    evolution=settings["evolution"])
                res = hhl_solve(matrix, rhs, config, reference=reference)
                used_constant = (constant if constant is not None else
                                 config.precision_spec
                                 .default_rotation_constant)
                rows.append((precision, res.n_clock,
                             settings["trotter_steps"], used_constant,
                             prune, res.rotations,
                             res.success_probability, res.fidelity,
                             res.l2, res.rms, round(res.seconds, 6)))
        suffix = ("" if len(settings["coefficient_limits"]) == 1
                  else f"_climit_{coeff_limit:g}")
        if suffix:
            print(f"[coefficient limit {coeff_limit:g}]")
        _emit(out, f"hhl_diagnostics{suffix}", HHL_DIAGNOSTIC_COLUMNS, rows)
    (out / "notes.txt").write_text(
        "fidelity is the plain overlap |<x1|x2>| of normalized vectors "
        "(not squared)\n")


def cmd_sample(settings: dict, out: Path) -> None:
    config = _case_config(settings)
    iterations = settings["iterations"]
    if not iterations:
        raise ConfigError("sample needs at least one iteration")
    if any(j < 1 or j >= config.outer_max for j in iterations):
        raise ConfigError("sample iterations must lie in [1, outer_max)")
    systems = sample_systems(config, iterations)
    summary_rows = []
    for requested, sample in systems.items():
        tag = f"iter{requested}"
        write_matrix_market(out / f"pc_matrix_{tag}.mtx", sample.matrix,
                            comment=f"pressure-correction matrix, outer "
                                    f"iteration {sample.iteration}, "
                                    f"{config.nodes_per_side}-node mesh")
        write_vector(out / f"pc_rhs_{tag}.txt", sample.rhs,
                     comment=f"pressure-correction rhs, iteration "
                             f"{sample.iteration}")
        write_vector(out / f"pc_solution_{tag}.txt", sample.solution,
                     comment=f"classical GS solution, iteration "
                             f"{sample.iteration}")
        if sample.warning:
            print(f"warning: {sample.warning}")
        embedded = symmetrize(sample.matrix)
        t0 = time.perf_counter()
        template = decompose_hadamard(embedded)
        decomp_seconds = time.perf_counter() - t0
        t0 = time.perf_counter()
        reevaluate(template, embedded)
        reeval_seconds = time.perf_counter() - t0
        save_template(template, out / f"template_{tag}.npz")
        summary_rows.append((config.nodes_per_side, embedded.n,
                             template.cluster_count, template.candidate_count,
                             template.nonzero_count,
                             round(decomp_seconds, 6),
                             round(reeval_seconds, 6)))
    _emit(out, "lcu_summary", LCU_SUMMARY_COLUMNS, summary_rows)


def cmd_bench(settings: dict, out: Path) -> None:
    meshes = settings["meshes"]
    if not meshes:
        raise ConfigError("bench needs at least one mesh")
    bad = [m for m in meshes if m not in _DESK_MESHES]
    if bad:
        raise ConfigError(f"unsupported mesh sizes {bad}; "
                          f"choose from {_DESK_MESHES}")
    rows = []
    for nodes in meshes:
        config = _case_config(settings, nodes_per_side=nodes)
        t0 = time.perf_counter()
        result = run_simple(config)
        cfd_seconds = time.perf_counter() - t0
        matrix, _, _ = _pc_system_at_iteration_10(nodes)
        embedded = symmetrize(matrix)
        t0 = time.perf_counter()
        template = decompose_hadamard(embedded)
        decomp_seconds = time.perf_counter() - t0
        t0 = time.perf_counter()
        reevaluate(template, embedded)
        reeval_seconds = time.perf_counter() - t0
        lcu_seconds = decomp_seconds + reeval_seconds * result.iterations
        rows.append((nodes, embedded.n, result.iterations,
                     round(cfd_seconds, 4), round(decomp_seconds, 6),
                     round(reeval_seconds, 6), round(lcu_seconds, 4),
                     round(lcu_seconds / cfd_seconds, 4)))
    _emit(out, "bench", BENCH_COLUMNS, rows)


_COMMANDS = {
    "classical": cmd_classical,
    "hybrid": cmd_hybrid,
    "decompose": cmd_decompose,
    "hhl": cmd_hhl,
    "sample": cmd_sample,
    "bench": cmd_bench,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qcfd",
        description="lid-driven-cavity workbench: classical SIMPLE, "
                    "Pauli-string decompositions, emulated quantum solves")
    parser.add_argument("subcommand", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="flat key=value settings file")
    parser.add_argument("--out", help="output directory "
                                      "(default runs/<subcommand>)")
    parser.add_argument("overrides", nargs="*", metavar="key=value",
                        help="settings overriding the config file")
    args = parser.parse_intermixed_args(argv)
    try:
        settings = resolve_settings(args.subcommand, args.config,
                                    args.overrides)
        out = Path(args.out) if args.out else Path("runs") / args.subcommand
        out.mkdir(parents=True, exist_ok=True)
        _write_manifest(out, args.subcommand, settings)
        _COMMANDS[args.subcommand](settings, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except IoFormatError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 4
    except QcfdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0
