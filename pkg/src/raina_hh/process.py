"""Seeded stochastic processes on an interval.

A process is described by its family and convexity metadata; concrete
realisations are drawn one path at a time. Path ``i`` under seed ``s``
comes from a Philox stream whose key is ``s`` and whose counter starts at
``i << 192``, so it never depends on how many other paths are drawn or in
which order.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate
from scipy.special import ndtri

from .errors import ConfigError, DataError, DomainError, QuadratureError, UnsupportedFamilyError

FAMILIES = ("random_polynomial", "deterministic_function", "user_table")
CONVEXITY_CLASSES = ("none", "jensen_convex", "convex", "strongly_convex")
MAX_DEGREE = 4

__all__ = [
    "Distribution",
    "IntegralEstimate",
    "Modulus",
    "Path",
    "StochasticProcess",
    "mean_square_convergence_diagnostic",
    "mean_square_integral",
    "parse_poly_expression",
    "process_from_config",
    "sample_path",
    "sample_paths",
    "strong_convexity_gap",
    "supporting_path",
    "supporting_process",
]


# ---------------------------------------------------------------- distributions

_DIST_RE = re.compile(r"^\s*(uniform|normal|const)\s*\(([^)]*)\)\s*$")


@dataclass(frozen=True)
class Distribution:
    """``uniform(lo, hi)``, ``normal(mu, sd)`` or ``const(c)``."""

    kind: str
    a: float
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in ("uniform", "normal", "const"):
            raise DomainError(f"unknown distribution {self.kind!r}")
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError("distribution parameters must be finite")
        if self.kind == "uniform" and not self.a <= self.b:
            raise DomainError(f"uniform({self.a}, {self.b}) needs lo <= hi")
        if self.kind == "normal" and not self.b >= 0:
            raise DomainError("normal sd must be nonnegative")

    @classmethod
    def parse(cls, text: str) -> "Distribution":
        if isinstance(text, (int, float)):
            return cls("const", float(text))
        m = _DIST_RE.match(text)
        if not m:
            raise ConfigError(f"cannot parse distribution {text!r}")
        kind, args = m.group(1), [a for a in m.group(2).split(",") if a.strip()]
        try:
            nums = [float(a) for a in args]
        except ValueError:
            raise ConfigError(f"non-numeric argument in {text!r}") from None
        want = 1 if kind == "const" else 2
        if len(nums) != want:
            raise ConfigError(f"{kind} takes {want} argument(s), got {len(nums)} in {text!r}")
        try:
            return cls(kind, *nums)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == "const":
            return self.a, self.a
        if self.kind == "uniform":
            return self.a, self.b
        if self.b == 0:
            return self.a, self.a
        return -math.inf, math.inf

    def draw(self, rng: np.random.Generator) -> float:
        # always consume exactly one draw so stream positions stay aligned
        u = rng.random()
        if self.kind == "const":
            return self.a
        if self.kind == "uniform":
            return self.a + (self.b - self.a) * u
        return self.a + self.b * float(ndtri(min(max(u, 1e-300), 1 - 2**-53)))

    def __str__(self):
        if self.kind == "const":
            return f"const({self.a!r})"
        return f"{self.kind}({self.a!r},{self.b!r})"


@dataclass(frozen=True)
class Modulus:
    """Strong-convexity modulus C per path.

    ``kind`` is ``"dist"`` (independent draw), ``"leading"`` (C equals the
    quadratic coefficient) or ``"scaled"`` (C = factor * quadratic coefficient).
    """

    kind: str
    dist: Distribution | None = None
    factor: float = 1.0

    @classmethod
    def parse(cls, text) -> "Modulus":
        if isinstance(text, (int, float)):
            return cls("dist", Distribution("const", float(text)))
        text = text.strip()
        if text == "leading":
            return cls("leading")
        m = re.match(r"^scaled\(\s*([^)]+)\)$", text)
        if m:
            f = float(m.group(1))
            if not 0 < f <= 1:
                raise ConfigError(f"scaled modulus factor must be in (0, 1], got {f}")
            return cls("scaled", factor=f)
        return cls("dist", Distribution.parse(text))

    def __str__(self):
        if self.kind == "leading":
            return "leading"
        if self.kind == "scaled":
            return f"scaled({self.factor!r})"
        return str(self.dist)


# ---------------------------------------------------------------- paths


@dataclass(frozen=True)
class Path:
    """One realisation t -> X(t, omega) on ``interval``.

    Polynomial paths carry ascending ``coeffs`` and are then differentiable
    with exact antiderivatives.
    """

    evaluator: Callable = field(compare=False)
    path_index: int
    seed: int
    interval: tuple[float, float]
    coeffs: np.ndarray | None = field(default=None, compare=False)
    modulus: float | None = None
    knots: tuple[np.ndarray, np.ndarray] | None = field(default=None, compare=False)

    def __call__(self, t):
        return self.evaluator(t)

    @property
    def is_polynomial(self) -> bool:
        return self.coeffs is not None

    def derivative(self, t, order: int = 1):
        if self.coeffs is None:
            raise UnsupportedFamilyError("derivatives need a polynomial path")
        return P.polyval(t, P.polyder(self.coeffs, order))

    def convexity_margin(self) -> float:
        """Exact minimum of X'' - 2C over the interval (C = 0 without a modulus).

        Nonnegative iff the path is convex (strongly convex with its modulus).
        """
        if self.coeffs is None:
            raise UnsupportedFamilyError("convexity margin needs a polynomial path")
        d2 = P.polyder(self.coeffs, 2) if len(self.coeffs) > 2 else np.zeros(1)
        a, b = self.interval
        cand = [a, b]
        if len(d2) > 2:
            cand += [r for r in P.polyroots(P.polyder(d2)).real if a < r < b]
        return float(min(P.polyval(cand, d2))) - 2.0 * (self.modulus or 0.0)


def _poly_path(coeffs, index, seed, interval, modulus=None) -> Path:
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if c.size == 0:
        c = np.zeros(1)
    return Path(lambda t, c=c: P.polyval(t, c), index, seed, interval, c, modulus)


# ---------------------------------------------------------------- process


@dataclass(frozen=True)
class StochasticProcess:
    """Process metadata plus what is needed to sample paths.

    ``coefficients`` holds ascending coefficient distributions for
    ``random_polynomial``; ``function`` is either a callable or ascending
    polynomial coefficients for ``deterministic_function``; ``table`` is
    ``(t_grid, values)`` with one row per path for ``user_table``.
    """

    interval: tuple[float, float]
    family: str
    convexity: str = "none"
    coefficients: tuple[Distribution, ...] = ()
    function: Callable | tuple[float, ...] | None = field(default=None, compare=False)
    table: tuple[np.ndarray, np.ndarray] | None = field(default=None, compare=False)
    modulus: Modulus | None = None
    name: str = ""

    def __post_init__(self):
        a, b = self.interval
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise DomainError(f"interval must satisfy a < b, got {self.interval!r}")
        object.__setattr__(self, "interval", (float(a), float(b)))
        if self.family not in FAMILIES:
            raise DomainError(f"unsupported family {self.family!r}")
        if self.convexity not in CONVEXITY_CLASSES:
            raise DomainError(f"unknown convexity class {self.convexity!r}")
        if self.family == "random_polynomial":
            if not self.coefficients:
                raise DomainError("random_polynomial needs coefficient distributions")
            if len(self.coefficients) - 1 > MAX_DEGREE:
                raise DomainError(f"degree above {MAX_DEGREE} is not supported")
            self._check_polynomial_class()
        elif self.family == "deterministic_function":
            if self.function is None:
                raise DomainError("deterministic_function needs a function")
            if not callable(self.function):
                coeffs = tuple(float(c) for c in self.function)
                if len(coeffs) - 1 > MAX_DEGREE:
                    raise DomainError(f"degree above {MAX_DEGREE} is not supported")
                object.__setattr__(self, "function", coeffs)
        else:
            if self.table is None:
                raise DomainError("user_table needs a (t_grid, values) table")
            t, vals = (np.asarray(x, dtype=float) for x in self.table)
            vals = np.atleast_2d(vals)
            if t.ndim != 1 or vals.shape[1] != t.size or t.size < 2:
                raise DataError("table values must have one column per grid point")
            if np.any(np.diff(t) <= 0):
                raise DataError("table grid must be strictly increasing")
            object.__setattr__(self, "table", (t, vals))
        if self.convexity == "strongly_convex" and self.modulus is None:
            raise DomainError("strongly_convex processes need a modulus")

    def _check_polynomial_class(self):
        deg = len(self.coefficients) - 1
        if deg > 2 or self.convexity in ("none",):
            return
        lead_lo = self.coefficients[2].support[0] if deg == 2 else 0.0
        if self.convexity in ("convex", "jensen_convex") and lead_lo < 0:
            raise DomainError("convex quadratic process needs a nonnegative leading coefficient")
        if self.convexity == "strongly_convex":
            mod = self.modulus
            if mod is None:
                raise DomainError("strongly_convex processes need a modulus")
            if mod.kind == "dist":
                c_lo, c_hi = mod.dist.support
                if not c_lo > 0:
                    raise DomainError("modulus must be a positive random variable")
                if lead_lo < c_hi:
                    raise DomainError("strong convexity needs leading coefficient >= modulus on every path")
            elif not lead_lo > 0:
                raise DomainError("a modulus tied to the leading coefficient needs it strictly positive")

    @property
    def degree(self) -> int | None:
        if self.family == "random_polynomial":
            return len(self.coefficients) - 1
        if self.family == "deterministic_function" and not callable(self.function):
            return len(self.function) - 1
        return None

    @property
    def is_polynomial(self) -> bool:
        return self.degree is not None

    def describe(self) -> str:
        if self.name:
            return self.name
        if self.family == "random_polynomial":
            return "random:" + ",".join(str(d) for d in self.coefficients)
        if self.family == "deterministic_function":
            return "poly:" + ",".join(repr(c) for c in self.function) if self.is_polynomial else "function"
        return "table"

    # convenience constructors
    @classmethod
    def polynomial(cls, coeffs: Sequence, interval=(0.0, 1.0), convexity="convex", modulus=None, name=""):
        """Random polynomial from ascending coefficient specs (strings, numbers or Distributions)."""
        dists = tuple(c if isinstance(c, Distribution) else Distribution.parse(c) for c in coeffs)
        if modulus is not None and not isinstance(modulus, Modulus):
            modulus = Modulus.parse(modulus)
        return cls(tuple(interval), "random_polynomial", convexity, dists, modulus=modulus, name=name)

    @classmethod
    def deterministic(cls, function, interval=(0.0, 1.0), convexity="convex", modulus=None, name=""):
        if modulus is not None and not isinstance(modulus, Modulus):
            modulus = Modulus.parse(modulus)
        return cls(tuple(interval), "deterministic_function", convexity, function=function, modulus=modulus, name=name)


def _rng(seed: int, path_index: int) -> np.random.Generator:
    if path_index < 0:
        raise DomainError("path_index must be nonnegative")
    counter = np.zeros(4, dtype=np.uint64)
    counter[3] = path_index
    return np.random.Generator(np.random.Philox(key=int(seed) % 2**64, counter=counter))


def sample_path(process: StochasticProcess, seed: int, path_index: int) -> Path:
    fam = process.family
    if fam == "random_polynomial":
        rng = _rng(seed, path_index)
        coeffs = np.array([d.draw(rng) for d in process.coefficients])
        modulus = None
        if process.modulus is not None:
            mod = process.modulus
            if mod.kind == "dist":
                modulus = mod.dist.draw(rng)
            else:
                lead = coeffs[2] if coeffs.size > 2 else 0.0
                modulus = float(lead * mod.factor)
        return _poly_path(coeffs, path_index, seed, process.interval, modulus)
    modulus = None
    if process.modulus is not None:
        mod = process.modulus
        if mod.kind == "dist":
            modulus = mod.dist.draw(_rng(seed, path_index))
        else:
            c = process.function if process.is_polynomial else ()
            modulus = float((c[2] if len(c) > 2 else 0.0) * mod.factor)
    if fam == "deterministic_function":
        if process.is_polynomial:
            return _poly_path(process.function, path_index, seed, process.interval, modulus)
        return Path(process.function, path_index, seed, process.interval, None, modulus)
    if fam == "user_table":
        t, vals = process.table
        if path_index >= vals.shape[0]:
            raise DomainError(f"table has {vals.shape[0]} paths, index {path_index} requested")
        row = vals[path_index]
        return Path(lambda s, t=t, row=row: np.interp(s, t, row), path_index, seed, process.interval, None, modulus, (t, row))
    raise UnsupportedFamilyError(f"unsupported family {fam!r}")


def _pmap(fn, items: Iterable, workers: int | None):
    items = list(items)
    if not workers or workers <= 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))  # map keeps input order


def sample_paths(process: StochasticProcess, seed: int, n_paths: int, workers: int | None = None) -> list[Path]:
    if n_paths < 1:
        raise DomainError("n_paths must be at least 1")
    return _pmap(lambda i: sample_path(process, seed, i), range(n_paths), workers)


# ---------------------------------------------------------------- integrals


@dataclass(frozen=True)
class IntegralEstimate:
    per_path_values: np.ndarray
    mean: float
    variance: float
    n_paths: int
    method: str

    @classmethod
    def from_values(cls, values, method: str) -> "IntegralEstimate":
        vals = np.asarray(values, dtype=float)
        n = vals.size
        if n < 1:
            raise DomainError("an estimate needs at least one path")
        var = float(np.var(vals, ddof=1)) if n > 1 else 0.0
        return cls(vals, float(np.mean(vals)), var, n, method)


def path_integral(path: Path, u: float, v: float) -> tuple[float, str]:
    """Ordinary integral of one path over [u, v] and the method used."""
    if path.coeffs is not None:
        anti = P.polyint(path.coeffs)
        return float(P.polyval(v, anti) - P.polyval(u, anti)), "exact_closed_form"
    if path.knots is not None:
        t, row = path.knots
        if not np.all(np.isfinite(row)):
            raise DataError(f"path {path.path_index} of the table has non-finite values")
        inner = (t > u) & (t < v)
        tt = np.concatenate(([u], t[inner], [v]))
        return float(integrate.trapezoid(np.interp(tt, t, row), tt)), "exact_closed_form"
    val, err = integrate.quad(path.evaluator, u, v, epsabs=1e-12, epsrel=1e-12, limit=200)
    if not math.isfinite(val) or err > 1e-8 * max(1.0, abs(val)):
        raise QuadratureError(f"quadrature of path {path.path_index} did not converge (err {err:g})")
    return float(val), "quadrature"


def _check_subinterval(process: StochasticProcess, u: float, v: float):
    a, b = process.interval
    if not (a <= u < v <= b):
        raise DomainError(f"[{u}, {v}] must be a nonempty subinterval of [{a}, {b}]")


def mean_square_integral(
    process: StochasticProcess, u: float, v: float, n_paths: int, seed: int, workers: int | None = None
) -> IntegralEstimate:
    _check_subinterval(process, u, v)
    results = _pmap(lambda p: path_integral(p, u, v), sample_paths(process, seed, n_paths, workers), workers)
    methods = {m for _, m in results}
    return IntegralEstimate.from_values([r for r, _ in results], methods.pop() if len(methods) == 1 else "quadrature")


def mean_square_convergence_diagnostic(
    process: StochasticProcess,
    u: float,
    v: float,
    partition_levels: Sequence[int],
    n_paths: int,
    seed: int,
    rule: str = "left",
) -> list[tuple[int, float]]:
    """E[(S_n - S)^2] for uniform n-partitions, S_n the Riemann sum with
    tags at the left endpoint, midpoint or right endpoint of each cell."""
    levels = list(partition_levels)
    if any(n < 1 for n in levels) or any(b <= a for a, b in zip(levels, levels[1:])):
        raise DomainError("partition levels must be positive and strictly increasing")
    offset = {"left": 0.0, "midpoint": 0.5, "right": 1.0}.get(rule)
    if offset is None:
        raise DomainError(f"unknown Riemann rule {rule!r}")
    _check_subinterval(process, u, v)
    paths = sample_paths(process, seed, n_paths)
    exact = np.array([path_integral(p, u, v)[0] for p in paths])
    out = []
    for n in levels:
        h = (v - u) / n
        tags = u + h * (np.arange(n) + offset)
        sums = np.array([h * np.sum(np.asarray(p(tags), dtype=float) * np.ones(n)) for p in paths])
        out.append((n, float(np.mean((sums - exact) ** 2))))
    return out


# ---------------------------------------------------------------- convexity tools


def supporting_path(path: Path, t0: float) -> Path:
    """Tangent line at ``t0``: X'(t0)(t - t0) + X(t0)."""
    if not path.is_polynomial:
        raise UnsupportedFamilyError("supports are constructed only for differentiable (polynomial) paths")
    a, b = path.interval
    if not a < t0 < b:
        raise DomainError(f"t0={t0} must lie in the open interval ({a}, {b})")
    slope = float(path.derivative(t0))
    x0 = float(path(t0))
    return _poly_path([x0 - slope * t0, slope], path.path_index, path.seed, path.interval)


def supporting_process(process: StochasticProcess, t0: float, seed: int, path_index: int) -> Path:
    if process.convexity not in ("convex", "strongly_convex"):
        raise DomainError(f"supports need a convex process, got class {process.convexity!r}")
    if not process.is_polynomial:
        raise UnsupportedFamilyError(f"family {process.family!r} is not differentiable in t")
    return supporting_path(sample_path(process, seed, path_index), t0)


def strong_convexity_gap(
    process: StochasticProcess, u: float, v: float, lambda_mix: float, seed: int, n_paths: int
) -> np.ndarray:
    """Per-path lam X(u) + (1-lam) X(v) - X(lam u + (1-lam) v) - C lam (1-lam) (u-v)^2."""
    if process.modulus is None:
        raise ConfigError("strong convexity gap needs a modulus", "modulus")
    if not 0.0 <= lambda_mix <= 1.0:
        raise DomainError("mixing weight must lie in [0, 1]")
    lm = lambda_mix
    mid = lm * u + (1 - lm) * v
    gaps = []
    for p in sample_paths(process, seed, n_paths):
        gaps.append(lm * p(u) + (1 - lm) * p(v) - p(mid) - p.modulus * lm * (1 - lm) * (u - v) ** 2)
    return np.asarray(gaps, dtype=float)


# ---------------------------------------------------------------- parsing

_TERM_RE = re.compile(r"([+-]?)\s*([0-9.eE]*(?:\d)(?:[eE][+-]?\d+)?)?\s*\*?\s*(t(?:\s*\^\s*(\d+))?)?")


def parse_poly_expression(expr: str) -> list[float]:
    """Parse ``"3t^2+t-0.75"`` style expressions to ascending coefficients."""
    text = expr.replace(" ", "").replace("**", "^")
    if not text:
        raise ConfigError("empty polynomial expression")
    coeffs = [0.0] * (MAX_DEGREE + 1)
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ConfigError(f"cannot parse polynomial {expr!r} at position {pos}")
        sign = -1.0 if m.group(1) == "-" else 1.0
        if pos > 0 and not m.group(1):
            raise ConfigError(f"missing operator in {expr!r} at position {pos}")
        c = float(m.group(2)) if m.group(2) else 1.0
        deg = 0 if m.group(3) is None else int(m.group(4) or 1)
        if deg > MAX_DEGREE:
            raise ConfigError(f"degree {deg} above {MAX_DEGREE} in {expr!r}")
        coeffs[deg] += sign * c
        pos = m.end()
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
    return coeffs


_NAMED_FUNCTIONS = {"exp": np.exp, "cosh": np.cosh, "abs": np.abs}


def process_from_config(cfg: dict, base_dir: str | FilePath = ".") -> StochasticProcess:
    """Build a process from a parsed config table (see README for the schema)."""
    if "family" not in cfg:
        raise ConfigError("missing field", "process.family")
    family = cfg["family"]
    interval = cfg.get("interval", [0.0, 1.0])
    if not (isinstance(interval, (list, tuple)) and len(interval) == 2):
        raise ConfigError("interval must be a two-element list", "process.interval")
    convexity = cfg.get("convexity", "none")
    modulus = cfg.get("modulus")
    try:
        mod = Modulus.parse(modulus) if modulus is not None else None
        if family == "random_polynomial":
            coeffs = cfg.get("coefficients")
            if not coeffs:
                raise ConfigError("random_polynomial needs a coefficients list", "process.coefficients")
            if "degree" in cfg and int(cfg["degree"]) != len(coeffs) - 1:
                raise ConfigError("degree disagrees with the number of coefficients", "process.degree")
            return StochasticProcess.polynomial(coeffs, interval, convexity, mod, cfg.get("name", ""))
        if family == "deterministic_function":
            expr = cfg.get("expression")
            if expr is None:
                raise ConfigError("deterministic_function needs an expression", "process.expression")
            fn = _NAMED_FUNCTIONS.get(expr.strip()) or parse_poly_expression(expr)
            return StochasticProcess.deterministic(fn, interval, convexity, mod, cfg.get("name", expr))
        if family == "user_table":
            if "file" in cfg:
                src = FilePath(base_dir) / cfg["file"]
                try:
                    data = np.loadtxt(src, delimiter=",", ndmin=2)
                except (OSError, ValueError) as exc:
                    raise ConfigError(str(exc), f"process.file ({src})") from None
                t, vals = data[0], data[1:]
            elif "t" in cfg and "values" in cfg:
                t, vals = np.asarray(cfg["t"], float), np.asarray(cfg["values"], float)
            else:
                raise ConfigError("user_table needs a file or inline t/values", "process")
            return StochasticProcess(tuple(interval), "user_table", convexity, table=(t, vals), modulus=mod,
                                     name=cfg.get("name", "table"))
    except ConfigError as exc:
        if exc.where is None:
            raise ConfigError(str(exc), "process") from None
        raise
    except (DomainError, DataError) as exc:
        raise ConfigError(str(exc), "process") from None
    raise ConfigError(f"unsupported family {family!r}", "process.family")


def parse_process_spec(spec: str, interval=(0.0, 1.0), convexity="convex", modulus=None) -> StochasticProcess:
    """Short CLI form: ``poly:<expr>`` (deterministic polynomial) or
    ``random:<dist>;<dist>;...`` (ascending random coefficients)."""
    head, _, body = spec.partition(":")
    if head == "poly":
        return StochasticProcess.deterministic(parse_poly_expression(body), interval, convexity, modulus, name=spec)
    if head == "random":
        return StochasticProcess.polynomial([s for s in body.split(";") if s.strip()], interval, convexity, modulus,
                                            name=spec)
    if head == "fn" and body in _NAMED_FUNCTIONS:
        return StochasticProcess.deterministic(_NAMED_FUNCTIONS[body], interval, convexity, modulus, name=spec)
    raise ConfigError(f"unknown process spec {spec!r}")
