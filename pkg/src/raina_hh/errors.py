"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RainaHHError(Exception):
    """Base class for all package errors."""


class DomainError(RainaHHError, ValueError):
    """Parameters outside the domain where an operation is defined."""


class BudgetExceededError(RainaHHError, ArithmeticError):
    """A series could not certify its tail bound within the term budget."""


class NormalizationDegenerateError(RainaHHError, ArithmeticError):
    """The Hermite-Hadamard normalization is non-positive or below the floor."""


class QuadratureError(RainaHHError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class UnsupportedFamilyError(DomainError):
    """The operation needs structure (e.g. differentiability) the family lacks."""


class ConfigError(RainaHHError, ValueError):
    """Malformed or inconsistent configuration.

    ``where`` carries a line or field locator when one is known.
    """

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class DataError(RainaHHError, ValueError):
    """Tabulated data that cannot be integrated or interpreted."""
