"""Polar reduction of ``x' = -y + F, y' = x + G`` to ``dr/dphi = sum a_i(phi) r^{i+1}``.

With ``x = r cos(phi)``, ``y = r sin(phi)`` one has

    r'   = (x F + y G) / r        = sum_d r^d     P_d(phi)
    phi' = 1 + (x G - y F) / r^2  = 1 + sum_d r^{d-1} Q_d(phi)

so ``dr/dphi = r^2 (sum_j r^j P_{j+2}) / (1 + sum_j r^j Q_{j+1})``; the
division is a truncated geometric series. Orientation is counterclockwise
and the period is ``2*pi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from scipy.integrate import solve_ivp

from .coeffs import CoeffSeq
from .exppoly import ONE_EP, ZERO_EP, ExpPoly
from .scalar import I, Scalar, as_scalar

__all__ = [
    "PlanarField",
    "AlphaWeight",
    "trig_restrict",
    "polar_reduce",
    "param_count",
    "check_alpha_homogeneous",
    "planar_return",
]

Monomials = dict[tuple[int, int], Scalar]

_E = ExpPoly.monomial(1, 0, 1)
_EINV = ExpPoly.monomial(1, 0, -1)
_COS = (_E + _EINV).scale(as_scalar(1) / 2)
_SIN = (_E - _EINV).scale(-I / 2)


def param_count(d: int) -> int:
    """Number of coefficients of ``F`` and ``G`` with all degrees ``2..d``: ``d^2 + 3d - 4``."""
    if d < 2:
        raise ValueError("degree must be at least 2")
    return d * d + 3 * d - 4


@dataclass(frozen=True)
class PlanarField:
    """Polynomial perturbations ``F, G`` without constant or linear terms."""

    F: Monomials = field(default_factory=dict)
    G: Monomials = field(default_factory=dict)

    def __post_init__(self):
        for name in ("F", "G"):
            clean = {}
            for (p, q), c in getattr(self, name).items():
                if p < 0 or q < 0:
                    raise ValueError(f"{name}: negative exponent in x^{p} y^{q}")
                if p + q < 2:
                    raise ValueError(f"{name}: constant/linear monomial x^{p} y^{q} not allowed")
                c = as_scalar(c)
                if c:
                    clean[(int(p), int(q))] = c
            object.__setattr__(self, name, clean)

    @property
    def degree(self) -> int:
        return max((p + q for p, q in (*self.F, *self.G)), default=0)

    def homogeneous_part(self, name: str, d: int) -> Monomials:
        return {k: c for k, c in getattr(self, name).items() if sum(k) == d}

    def is_real(self) -> bool:
        return all(c.is_real() for c in (*self.F.values(), *self.G.values()))

    def numeric(self):
        """Vectorised float callable ``(x, y) -> (F, G)`` (real parts)."""
        def compile_(mons):
            return [(complex(c).real, p, q) for (p, q), c in mons.items()]

        f, g = compile_(self.F), compile_(self.G)

        def ev(x, y):
            return (
                sum(c * x**p * y**q for c, p, q in f),
                sum(c * x**p * y**q for c, p, q in g),
            )

        return ev


def trig_restrict(h: Mapping[tuple[int, int], object]) -> ExpPoly:
    """``f(phi)`` with ``h(r cos phi, r sin phi) = r^d f(phi)`` for homogeneous ``h``."""
    degrees = {p + q for (p, q), c in h.items() if as_scalar(c)}
    if len(degrees) > 1:
        raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
    out = ZERO_EP
    for (p, q), c in h.items():
        c = as_scalar(c)
        if c:
            out = out + (_COS**p * _SIN**q).scale(c)
    return out


def _truncated_mul(a: list[ExpPoly], b: list[ExpPoly], deg: int) -> list[ExpPoly]:
    out = [ZERO_EP] * (deg + 1)
    for i, x in enumerate(a[: deg + 1]):
        if x.is_zero():
            continue
        for j, y in enumerate(b[: deg - i + 1]):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def polar_reduce(fld: PlanarField, N: int) -> CoeffSeq:
    """Coefficients ``a_1..a_N`` of the reduced equation as single-piece ExpPolys."""
    if N < 1:
        raise ValueError("order N must be >= 1")
    deg = N - 1
    num = [ZERO_EP] * (deg + 1)
    den = [ZERO_EP] * (deg + 1)
    for d in range(2, fld.degree + 1):
        f = trig_restrict(fld.homogeneous_part("F", d))
        g = trig_restrict(fld.homogeneous_part("G", d))
        P = _COS * f + _SIN * g
        Q = _COS * g - _SIN * f
        if d - 2 <= deg:
            num[d - 2] = P
        if d - 1 <= deg:
            den[d - 1] = Q
    # 1/(1+q) = sum_k (-q)^k; q has no constant term so k <= deg suffices
    neg_q = [-t for t in den]
    inv = [ONE_EP] + [ZERO_EP] * deg
    power = [ONE_EP] + [ZERO_EP] * deg
    for _ in range(deg):
        power = _truncated_mul(power, neg_q, deg)
        inv = [x + y for x, y in zip(inv, power)]
    A = _truncated_mul(num, inv, deg)
    return CoeffSeq({j + 1: A[j] for j in range(deg + 1)})


@dataclass(frozen=True)
class AlphaWeight:
    alpha: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        if any(a < 1 for a in self.alpha):
            raise ValueError("weights must be positive integers")


def check_alpha_homogeneous(
    p: Mapping[tuple[int, ...], object], alpha: AlphaWeight | tuple[int, ...]
) -> tuple[bool, int | None]:
    """Is ``p(w_1^{alpha_1}, ..., w_k^{alpha_k})`` homogeneous? Returns the weighted degree.

    The zero polynomial counts as homogeneous with degree ``None``.
    """
    if not isinstance(alpha, AlphaWeight):
        alpha = AlphaWeight(tuple(alpha))
    weights = set()
    for beta, c in p.items():
        if len(beta) != len(alpha.alpha):
            raise ValueError(
                f"monomial {beta} has arity {len(beta)}, weight has {len(alpha.alpha)}"
            )
        if as_scalar(c):
            weights.add(sum(a * b for a, b in zip(alpha.alpha, beta)))
    if not weights:
        return True, None
    if len(weights) == 1:
        return True, weights.pop()
    return False, None


@dataclass(frozen=True)
class PlanarReturn:
    x_return: float
    time: float
    gap: float


def planar_return(fld: PlanarField, x0: float, *, rtol: float = 1e-12, atol: float = 1e-14) -> PlanarReturn:
    """Follow the planar flow from ``(x0, 0)`` once around the origin.

    Stops at the next upward crossing of the positive ``x`` axis and reports
    the landing point and ``x_return - x0``.
    """
    ev = fld.numeric()

    def rhs(t, z):
        F, G = ev(z[0], z[1])
        return [-z[1] + F, z[0] + G]

    def crossing(t, z):
        return z[1]

    crossing.terminal = True
    crossing.direction = 1

    # leave the axis first so the start point is not reported as a crossing
    head = solve_ivp(rhs, (0.0, 1.0), [x0, 0.0], method="DOP853", rtol=rtol, atol=atol)
    tail = solve_ivp(
        rhs, (1.0, 50.0), head.y[:, -1], method="DOP853", rtol=rtol, atol=atol,
        events=crossing,
    )
    if not tail.t_events[0].size:
        raise RuntimeError("orbit did not return to the positive x axis")
    t_hit = float(tail.t_events[0][0])
    x_hit = float(tail.y_events[0][0][0])
    if x_hit <= 0:
        raise RuntimeError("orbit crossed the axis on the negative side")
    return PlanarReturn(x_hit, t_hit, x_hit - x0)
