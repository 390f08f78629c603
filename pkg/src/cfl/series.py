"""Truncated series ``r + sum_{n<=N} c_n r^{n+1}`` under composition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = ["ReturnSeries", "series_compose", "series_inverse"]


@dataclass(frozen=True)
class ReturnSeries:
    """Element of the composition group truncated after ``r**(N+1)``.

    ``coeffs[n-1]`` holds ``c_n``. The period is the canonical ``2*pi``.
    """

    coeffs: tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(as_scalar(c) for c in self.coeffs))

    @classmethod
    def identity(cls, N: int) -> "ReturnSeries":
        return cls((ZERO,) * N)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def c(self, n: int) -> Scalar:
        return self.coeffs[n - 1]

    def is_identity(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def polynomial(self) -> list[Scalar]:
        """Coefficients indexed by the power of ``r``, ``0..N+1``."""
        return [ZERO, ONE, *self.coeffs]

    def __call__(self, r: complex) -> complex:
        total = complex(r)
        p = complex(r)
        for c in self.coeffs:
            p *= r
            total += complex(c) * p
        return total

    def truncate(self, N: int) -> "ReturnSeries":
        if N > self.order:
            raise ValueError("cannot extend a truncated series")
        return ReturnSeries(self.coeffs[:N])


def _mul(a: Sequence[Scalar], b: Sequence[Scalar], deg: int) -> list[Scalar]:
    out = [ZERO] * (deg + 1)
    for i, x in enumerate(a):
        if i > deg or x.is_zero():
            continue
        for j, y in enumerate(b[: deg - i + 1]):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def series_compose(f: ReturnSeries, g: ReturnSeries) -> ReturnSeries:
    """``f o g``, i.e. ``r -> f(g(r))``, truncated at the common order."""
    if f.order != g.order:
        raise ValueError(f"order mismatch: {f.order} vs {g.order}")
    deg = f.order + 1
    F, G = f.polynomial(), g.polynomial()
    out = [ZERO] * (deg + 1)
    power = G
    for k in range(1, deg + 1):
        if k > 1:
            power = _mul(power, G, deg)
        if F[k].is_zero():
            continue
        for j in range(deg + 1):
            if not power[j].is_zero():
                out[j] = out[j] + F[k] * power[j]
    return ReturnSeries(tuple(out[2:]))


def series_inverse(f: ReturnSeries) -> ReturnSeries:
    """Compositional inverse by triangular back-substitution."""
    N = f.order
    d = [ZERO] * N
    for n in range(1, N + 1):
        trial = series_compose(f, ReturnSeries(tuple(d)))
        # the r^{n+1} coefficient of f(h) is d_n plus terms in d_1..d_{n-1}
        d[n - 1] = -trial.c(n)
    return ReturnSeries(tuple(d))
