"""Batch runs of Hermite-Hadamard checks over parameter grids.

A config is a TOML document::

    seed = 20240101            # mandatory
    n_paths = 100
    method = "auto"            # auto | termwise_exact | quadrature
    check = "auto"             # auto | convex | strongly_convex
    intervals = [[0.0, 1.0]]
    workers = 1

    [kernel]                   # every field is a list; the grid is the product
    rho = [1.0]
    lambda = [1.0]
    omega = [0.0]
    sigma = ["const1"]

    [process]                  # see process_from_config
    family = "deterministic_function"
    expression = "t^2"
    interval = [0.0, 1.0]
    convexity = "convex"

    [tolerances]
    abs = 1e-12
    rel = 1e-8

    [output]
    dir = "out"                # default: $RAINA_HH_OUT or "."
    csv = "summary.csv"
    json = "detail.json"       # optional
    full = false               # per-path arrays in the JSON
    fail_on = ["violations", "hypothesis", "errors"]

Cells run in grid order (rho, lambda, omega, sigma, interval), possibly
concurrently; output is always written in grid order.
"""

from __future__ import annotations

import itertools
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, RainaHHError
from .fracint import METHODS
from .hh import TOL_ABS, TOL_REL, hh_check_convex, hh_check_strongly_convex
from .process import StochasticProcess, process_from_config
from .reporting import CSV_SCHEMA, HH_COLUMNS, JSON_SCHEMA, csv_text, hh_row, json_text, write_text
from .series import RainaKernel, parse_sigma_spec

OUT_ENV = "RAINA_HH_OUT"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VIOLATIONS = 2
EXIT_HYPOTHESIS = 3
EXIT_CELL_ERRORS = 4

FAIL_CATEGORIES = ("violations", "hypothesis", "errors")


@dataclass
class ExperimentConfig:
    seed: int
    process: StochasticProcess
    rho: list[float]
    lam: list[float]
    omega: list[float]
    sigma: list[str]
    intervals: list[tuple[float, float]]
    n_paths: int = 100
    method: str = "auto"
    check: str = "auto"
    tol_abs: float = TOL_ABS
    tol_rel: float = TOL_REL
    out_dir: Path = field(default_factory=lambda: Path(os.environ.get(OUT_ENV, ".")))
    csv_name: str | None = "summary.csv"
    json_name: str | None = None
    full: bool = False
    fail_on: tuple[str, ...] = FAIL_CATEGORIES
    workers: int = 1

    def cells(self):
        return list(itertools.product(self.rho, self.lam, self.omega, self.sigma, self.intervals))

    def echo(self) -> dict:
        return {
            "seed": self.seed,
            "n_paths": self.n_paths,
            "method": self.method,
            "check": self.check,
            "process": self.process.describe(),
            "convexity": self.process.convexity,
            "rho": self.rho,
            "lambda": self.lam,
            "omega": self.omega,
            "sigma": self.sigma,
            "intervals": [list(iv) for iv in self.intervals],
            "tol_abs": self.tol_abs,
            "tol_rel": self.tol_rel,
        }


def _number_list(tbl: dict, key: str, where: str) -> list[float]:
    val = tbl.get(key)
    if val is None:
        raise ConfigError("missing field", f"{where}.{key}")
    if not isinstance(val, list):
        val = [val]
    if not val:
        raise ConfigError("grid must be nonempty", f"{where}.{key}")
    try:
        return [float(x) for x in val]
    except (TypeError, ValueError):
        raise ConfigError("grid entries must be numbers", f"{where}.{key}") from None


def config_from_dict(raw: dict, base_dir: Path = Path(".")) -> ExperimentConfig:
    if "seed" not in raw:
        raise ConfigError("a seed is mandatory (no wall-clock seeding)", "seed")
    if not isinstance(raw["seed"], int):
        raise ConfigError("seed must be an integer", "seed")
    if "process" not in raw:
        raise ConfigError("missing table", "process")
    kern = raw.get("kernel")
    if not isinstance(kern, dict):
        raise ConfigError("missing table", "kernel")
    sigma = kern.get("sigma", ["const1"])
    sigma = [sigma] if isinstance(sigma, str) else list(sigma)
    if not sigma:
        raise ConfigError("grid must be nonempty", "kernel.sigma")
    for s in sigma:
        parse_sigma_spec(s)
    intervals = raw.get("intervals")
    proc = process_from_config(raw["process"], base_dir)
    if intervals is None:
        intervals = [list(proc.interval)]
    if not intervals or not all(isinstance(iv, list) and len(iv) == 2 for iv in intervals):
        raise ConfigError("intervals must be a nonempty list of [u, v] pairs", "intervals")
    tol = raw.get("tolerances", {})
    out = raw.get("output", {})
    method = raw.get("method", "auto")
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}", "method")
    check = raw.get("check", "auto")
    if check not in ("auto", "convex", "strongly_convex"):
        raise ConfigError(f"unknown check {check!r}", "check")
    fail_on = tuple(out.get("fail_on", FAIL_CATEGORIES))
    if any(f not in FAIL_CATEGORIES for f in fail_on):
        raise ConfigError(f"fail_on entries must be among {FAIL_CATEGORIES}", "output.fail_on")
    cfg = ExperimentConfig(
        seed=raw["seed"],
        process=proc,
        rho=_number_list(kern, "rho", "kernel"),
        lam=_number_list(kern, "lambda", "kernel"),
        omega=_number_list(kern, "omega", "kernel"),
        sigma=sigma,
        intervals=[(float(a), float(b)) for a, b in intervals],
        n_paths=int(raw.get("n_paths", 100)),
        method=method,
        check=check,
        tol_abs=float(tol.get("abs", TOL_ABS)),
        tol_rel=float(tol.get("rel", TOL_REL)),
        out_dir=Path(out.get("dir", os.environ.get(OUT_ENV, "."))),
        csv_name=out.get("csv", "summary.csv"),
        json_name=out.get("json"),
        full=bool(out.get("full", False)),
        fail_on=fail_on,
        workers=int(raw.get("workers", 1)),
    )
    if cfg.n_paths < 1:
        raise ConfigError("must be at least 1", "n_paths")
    if not (cfg.tol_abs > 0 and cfg.tol_rel > 0):
        raise ConfigError("tolerances must be positive", "tolerances")
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(exc), str(path)) from None
    except OSError as exc:
        raise ConfigError(str(exc), str(path)) from None
    try:
        return config_from_dict(raw, path.parent)
    except ConfigError as exc:
        raise ConfigError(str(exc), str(path)) from None


def _run_cell(cfg: ExperimentConfig, idx: int, cell) -> tuple[dict, dict]:
    rho, lam, omega, sigma, (u, v) = cell
    params = {"rho": rho, "lambda": lam, "omega": omega, "sigma": sigma, "u": u, "v": v, "seed": cfg.seed}
    try:
        kernel = RainaKernel(rho, lam, omega, parse_sigma_spec(sigma))
        strong = cfg.check == "strongly_convex" or (
            cfg.check == "auto" and cfg.process.convexity == "strongly_convex"
        )
        fn = hh_check_strongly_convex if strong else hh_check_convex
        report = fn(cfg.process, kernel, u, v, cfg.n_paths, cfg.seed,
                    method=cfg.method, tol_abs=cfg.tol_abs, tol_rel=cfg.tol_rel)
    except (RainaHHError, ArithmeticError, ValueError) as exc:
        row = hh_row(idx, status="error", error=f"{type(exc).__name__}: {exc}", params=params)
        return row, dict(row)
    if not report.ok:
        status = "violations"
    elif not report.hypothesis_verified:
        status = "hypothesis_unverified"
    else:
        status = "ok"
    row = hh_row(idx, report, status=status)
    detail = {**report.to_dict(full=cfg.full), "cell": idx, "status": status, "extra": report.extra}
    return row, detail


def exit_status(rows: list[dict], fail_on=FAIL_CATEGORIES) -> int:
    statuses = {r["status"] for r in rows}
    if "violations" in statuses and "violations" in fail_on:
        return EXIT_VIOLATIONS
    if "error" in statuses and "errors" in fail_on:
        return EXIT_CELL_ERRORS
    if "hypothesis_unverified" in statuses and "hypothesis" in fail_on:
        return EXIT_HYPOTHESIS
    return EXIT_OK


def run_experiment(cfg: ExperimentConfig) -> tuple[int, list[dict], dict[str, Path]]:
    """Run every grid cell; return (exit status, summary rows, written files)."""
    cells = cfg.cells()
    job = lambda item: _run_cell(cfg, item[0], item[1])  # noqa: E731
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as ex:
            results = list(ex.map(job, enumerate(cells)))
    else:
        results = [job(item) for item in enumerate(cells)]
    rows = [r for r, _ in results]
    written = {}
    if cfg.csv_name:
        written["csv"] = write_text(cfg.out_dir / cfg.csv_name, csv_text(rows, HH_COLUMNS, CSV_SCHEMA))
    if cfg.json_name:
        doc = {"schema": JSON_SCHEMA, "config": cfg.echo(), "cells": [d for _, d in results]}
        written["json"] = write_text(cfg.out_dir / cfg.json_name, json_text(doc))
    return exit_status(rows, cfg.fail_on), rows, written
