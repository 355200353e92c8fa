"""Raina's function and its shifted-coefficient relatives.

The series

    F(x) = sum_k sigma(k) x**k / Gamma(rho*k + lam)

is entire whenever ``sigma`` is bounded and ``rho > 0``, so evaluation is
accepted for every real ``x``; only the term budget limits how far out it
can go. Truncation is certified with a ratio majorant: the ratio of
consecutive majorant terms ``|x| Gamma(rho*k + lam) / Gamma(rho*k + rho + lam)``
is decreasing in ``k``, so once it drops below one the whole remainder is
bounded by a geometric series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import gammaln

from .errors import BudgetExceededError, ConfigError, DataError, DomainError, NormalizationDegenerateError

DEFAULT_TOL = 1e-12
DEFAULT_MAX_TERMS = 10_000

__all__ = [
    "CoefficientSequence",
    "RainaKernel",
    "RainaSeries",
    "TruncationReport",
    "certify_terms",
    "eval_raina",
    "load_sequence",
    "normalization_factor",
    "parse_sigma_spec",
]


@dataclass(frozen=True)
class CoefficientSequence:
    """Bounded positive sequence sigma(k).

    ``values`` is a finite prefix; ``generator`` (optional) supplies every
    index at or beyond the prefix. ``bound_M`` must dominate all terms.
    """

    values: tuple[float, ...] = ()
    generator: Callable[[int], float] | None = field(default=None, compare=False)
    bound_M: float = 1.0
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(s) for s in self.values))
        if not (math.isfinite(self.bound_M) and self.bound_M > 0):
            raise DomainError(f"bound_M must be a positive finite number, got {self.bound_M!r}")
        if not self.values and self.generator is None:
            raise DomainError("coefficient sequence needs a prefix or a generator")
        for k, s in enumerate(self.values):
            self._check(k, s)

    def _check(self, k: int, s: float) -> float:
        if not (s > 0 and math.isfinite(s)):
            raise DomainError(f"sigma({k}) = {s!r} is not a positive real")
        if s > self.bound_M * (1 + 1e-15):
            raise DomainError(f"sigma({k}) = {s!r} exceeds bound_M = {self.bound_M!r}")
        return s

    def __call__(self, k: int) -> float:
        if k < 0:
            raise DomainError("sigma is indexed from 0")
        if k < len(self.values):
            return self.values[k]
        if self.generator is None:
            raise BudgetExceededError(
                f"sigma({k}) requested but the sequence {self.name!r} has only "
                f"{len(self.values)} terms and no generator rule"
            )
        return self._check(k, float(self.generator(k)))

    def available(self) -> float:
        """Number of indices that can be produced (``inf`` with a generator)."""
        return math.inf if self.generator is not None else len(self.values)

    def first(self, n: int) -> np.ndarray:
        return np.array([self(k) for k in range(n)], dtype=float)

    def shifted(self, m: int, rho: float, lam: float) -> "CoefficientSequence":
        """Return sigma_m(k) = sigma(k) / (rho*k + lam + m)."""
        if m < 0 or int(m) != m:
            raise DomainError(f"shift must be a nonnegative integer, got {m!r}")
        if m == 0:
            return self
        m = int(m)
        prefix = tuple(s / (rho * k + lam + m) for k, s in enumerate(self.values))
        gen = None
        if self.generator is not None:
            parent = self.generator
            gen = lambda k: parent(k) / (rho * k + lam + m)  # noqa: E731
        return CoefficientSequence(prefix, gen, self.bound_M / (lam + m), f"{self.name}_{m}")

    @classmethod
    def constant(cls, c: float = 1.0) -> "CoefficientSequence":
        return cls((), lambda k: c, c, "const1" if c == 1.0 else f"const:{c!r}")

    @classmethod
    def geometric(cls, q: float) -> "CoefficientSequence":
        if not 0 < q <= 1:
            raise DomainError("geometric ratio must lie in (0, 1]")
        return cls((), lambda k: q**k, 1.0, f"geom:{q!r}")

    @classmethod
    def harmonic(cls) -> "CoefficientSequence":
        return cls((), lambda k: 1.0 / (k + 1), 1.0, "harmonic")


def load_sequence(path: str | Path) -> CoefficientSequence:
    """Read a sequence file: one positive decimal per line, optional
    ``bound_M=<value>`` header. Index is line number minus one (header excluded)."""
    path = Path(path)
    values: list[float] = []
    bound = None
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if lineno == 1 and line.startswith("bound_M="):
            try:
                bound = float(line.split("=", 1)[1])
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad bound_M header {line!r}") from None
            continue
        try:
            s = float(line)
        except ValueError:
            raise DataError(f"{path}:{lineno}: not a decimal: {line!r}") from None
        if not (s > 0 and math.isfinite(s)):
            raise DataError(f"{path}:{lineno}: coefficient must be positive, got {line!r}")
        values.append(s)
    if not values:
        raise DataError(f"{path}: no coefficients")
    if bound is None:
        bound = max(values)
    try:
        return CoefficientSequence(tuple(values), None, bound, f"file:{path}")
    except DomainError as exc:
        raise DataError(f"{path}: {exc}") from None


def parse_sigma_spec(spec: str) -> CoefficientSequence:
    """Build a sequence from a short spec string.

    Accepted forms: ``const1``, ``const:<c>``, ``geom:<q>``, ``harmonic``,
    ``list:<s0>,<s1>,...`` (prefix only) and ``file:<path>``.
    """
    spec = spec.strip()
    head, _, arg = spec.partition(":")
    try:
        if spec in ("const1", "ml", "mittag-leffler"):
            return CoefficientSequence.constant(1.0)
        if head == "const":
            return CoefficientSequence.constant(float(arg))
        if head == "geom":
            return CoefficientSequence.geometric(float(arg))
        if spec == "harmonic":
            return CoefficientSequence.harmonic()
        if head == "list":
            vals = tuple(float(a) for a in arg.split(","))
            return CoefficientSequence(vals, None, max(vals), spec)
        if head == "file":
            return load_sequence(arg)
    except ValueError as exc:
        raise ConfigError(f"bad sigma spec {spec!r}: {exc}") from None
    raise ConfigError(f"unknown sigma spec {spec!r}")


@dataclass(frozen=True)
class RainaKernel:
    rho: float
    lam: float
    omega: float
    sigma: CoefficientSequence = field(default_factory=CoefficientSequence.constant)

    def __post_init__(self):
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise DomainError(f"rho must be positive, got {self.rho!r}")
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise DomainError(f"lambda must be positive, got {self.lam!r}")
        if not math.isfinite(self.omega):
            raise DomainError(f"omega must be finite, got {self.omega!r}")

    def params(self) -> dict:
        return {"rho": self.rho, "lambda": self.lam, "omega": self.omega, "sigma": self.sigma.name}


@dataclass(frozen=True)
class TruncationReport:
    terms_used: int
    tail_bound: float
    requested_tol: float


def certify_terms(
    z: float,
    rho: float,
    lam: float,
    bound: float,
    tol: float,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> tuple[int, float]:
    """Smallest K with ``bound * sum_{k>=K} z**k / Gamma(rho*k+lam) <= tol``.

    Returns ``(K, tail_bound)``; terms ``0..K-1`` are then sufficient.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    z = abs(z)
    if z == 0.0 or bound == 0.0:
        return 1, 0.0
    logz = math.log(z)
    logb = math.log(bound)
    for K in range(1, max_terms + 1):
        g = math.lgamma(rho * K + lam)
        ratio = math.exp(logz + g - math.lgamma(rho * K + rho + lam))
        if ratio < 1.0:
            log_tail = logb + K * logz - g - math.log1p(-ratio)
            if log_tail < math.log(tol):
                return K, math.exp(log_tail)
    raise BudgetExceededError(
        f"tail bound for |x|={z:g}, rho={rho:g}, lambda={lam:g} not below {tol:g} "
        f"within {max_terms} terms"
    )


def _log_coefficients(kernel: RainaKernel, n: int, m: int, lam_eff: float) -> np.ndarray:
    seq = kernel.sigma.shifted(m, kernel.rho, kernel.lam)
    k = np.arange(n, dtype=float)
    return np.log(seq.first(n)) - gammaln(kernel.rho * k + lam_eff)


def _sequence_bound(kernel: RainaKernel, m: int) -> float:
    return kernel.sigma.bound_M / (kernel.lam + m) if m else kernel.sigma.bound_M


def eval_raina(
    kernel: RainaKernel,
    x: float,
    *,
    m: int = 0,
    lambda_override: float | None = None,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> tuple[float, TruncationReport]:
    """Evaluate F^{sigma_m}_{rho, lam_eff}(x) with a certified tail bound.

    ``lambda_override`` replaces the Gamma argument offset (e.g. ``lam + 1``)
    while the shift ``m`` still uses the kernel's own ``lam``.
    """
    if lambda_override is not None and not lambda_override > 0:
        raise DomainError("lambda_override must be positive")
    if m < 0 or int(m) != m:
        raise DomainError("sequence shift must be a nonnegative integer")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    lam_eff = kernel.lam if lambda_override is None else float(lambda_override)
    bound = _sequence_bound(kernel, m)
    K, tail = certify_terms(x, kernel.rho, lam_eff, bound, tol, max_terms)
    if K > kernel.sigma.available():
        raise BudgetExceededError(
            f"{K} terms needed but sequence {kernel.sigma.name!r} has only "
            f"{kernel.sigma.available()} and no generator"
        )
    logc = _log_coefficients(kernel, K, int(m), lam_eff)
    if x == 0.0:
        value = math.exp(logc[0])
    else:
        k = np.arange(K)
        terms = np.exp(logc + k * math.log(abs(x)))
        if x < 0:
            terms[1::2] *= -1.0
        value = math.fsum(terms.tolist())
    return value, TruncationReport(K, tail, tol)


class RainaSeries:
    """Vectorised evaluator of F^{sigma_m}_{rho,lam_eff} on ``|x| <= x_max``.

    Coefficients are fixed once with a certified truncation for the largest
    argument, so every evaluation inside the range meets ``tol``.
    """

    def __init__(
        self,
        kernel: RainaKernel,
        x_max: float,
        *,
        m: int = 0,
        lambda_override: float | None = None,
        tol: float = DEFAULT_TOL,
        max_terms: int = DEFAULT_MAX_TERMS,
    ):
        lam_eff = kernel.lam if lambda_override is None else lambda_override
        self.x_max = abs(float(x_max))
        K, tail = certify_terms(self.x_max, kernel.rho, lam_eff, _sequence_bound(kernel, m), tol, max_terms)
        if K > kernel.sigma.available():
            raise BudgetExceededError(f"sequence {kernel.sigma.name!r} too short for {K} terms")
        self.report = TruncationReport(K, tail, tol)
        self.coef = np.exp(_log_coefficients(kernel, K, m, lam_eff))

    def __call__(self, x):
        return P.polyval(x, self.coef)


def normalization_factor(kernel: RainaKernel, u: float, v: float, floor: float = 0.0, tol: float = DEFAULT_TOL) -> float:
    """Return ``2 (v-u)**lam * F^sigma_{rho,lam+1}[omega (v-u)**rho]``.

    Raises NormalizationDegenerateError when the value is not above ``floor``;
    this can only happen for negative omega.
    """
    if not u < v:
        raise DomainError(f"need u < v, got u={u!r}, v={v!r}")
    L = v - u
    scale = 2.0 * L**kernel.lam
    f, _ = eval_raina(kernel, kernel.omega * L**kernel.rho, lambda_override=kernel.lam + 1, tol=tol / max(1.0, scale))
    value = scale * f
    if not value > floor:
        raise NormalizationDegenerateError(
            f"normalization {value!r} not above floor {floor!r} for {kernel.params()} on [{u}, {v}]"
        )
    return value

