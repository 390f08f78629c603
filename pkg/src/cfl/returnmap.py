"""First-return-map coefficients and center certification.

Three independent routes compute ``P(a)(r) = v(T; r; a)``:

* :func:`return_coeffs_iterated` sums weighted iterated integrals over
  compositions of ``n``;
* :func:`return_coeffs_transport` substitutes ``v = r + sum c_n(x) r^{n+1}``
  into the equation and integrates the triangular system exactly;
* :func:`return_map_numeric` integrates the ODE in floating point.

The two exact routes must agree; :func:`center_check` refuses to produce a
verdict when they do not.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, solve_ivp

from .coeffs import TWO_PI, CoeffSeq, PiecewiseCoeff, coeff_tilde
from .exppoly import ONE_EP
from .integrals import _evaluator
from .scalar import ZERO, Scalar
from .series import ReturnSeries
from .words import Word, compositions, words_up_to

__all__ = [
    "CrossCheckError",
    "NumericFailure",
    "CenterVerdict",
    "comb_coefficient",
    "return_coeffs_iterated",
    "return_coeffs_transport",
    "numeric_radius",
    "return_map_numeric",
    "center_check",
]


class CrossCheckError(RuntimeError):
    """Two exact routes that must agree produced different values."""


class NumericFailure(RuntimeError):
    """Numeric integration did not converge or the solution blew up."""


def comb_coefficient(w: Word) -> int:
    """Weight ``(n - i_1 + 1)(n - i_1 - i_2 + 1)...1`` of the word in ``c_n``."""
    if not w:
        raise ValueError("the weight is defined for nonempty words only")
    n = sum(w)
    out, partial = 1, 0
    for i in w:
        if i < 1:
            raise ValueError("word letters must be positive")
        partial += i
        out *= n - partial + 1
    return out


def return_coeffs_iterated(a: CoeffSeq, N: int) -> ReturnSeries:
    """``c_n = sum_{w in compositions(n)} weight(w) * I_w(a)`` for ``n <= N``."""
    if N < 1:
        raise ValueError("order N must be >= 1")
    ev = _evaluator(a)
    support = set(a.support)
    coeffs = []
    for n in range(1, N + 1):
        total = ZERO
        for w in compositions(n):
            if support.issuperset(w):
                val = ev(w)
                if val:
                    total = total + val * comb_coefficient(w)
        coeffs.append(total)
    return ReturnSeries(tuple(coeffs))


def transport_functions(a: CoeffSeq, N: int) -> list[PiecewiseCoeff | None]:
    """The functions ``c_n(x)``, ``n = 0..N``, with ``v(x) = r * sum c_n(x) r^n``.

    Writing ``v = r*u`` turns the equation into ``u' = sum_i a_i r^i u^{i+1}``,
    so ``c_n' = sum_{i<=n} a_i [r^{n-i}] u^{i+1}`` only involves ``c_m``, ``m < n``.
    ``None`` stands for the zero function.
    """
    one = PiecewiseCoeff.single(ONE_EP)
    c: list[PiecewiseCoeff | None] = [one]
    powers: dict[tuple[int, int], PiecewiseCoeff | None] = {}

    def power(p: int, j: int) -> PiecewiseCoeff | None:
        # [r^j] u^p
        if j == 0:
            return one
        if p == 1:
            return c[j]
        key = (p, j)
        if key not in powers:
            acc = None
            for l in range(0, j + 1):
                if c[l] is None:
                    continue
                rest = power(p - 1, j - l)
                if rest is None:
                    continue
                term = rest if l == 0 else c[l] * rest
                acc = term if acc is None else acc + term
            if acc is not None and acc.is_zero():
                acc = None
            powers[key] = acc
        return powers[key]

    for n in range(1, N + 1):
        deriv = None
        for i in a.support:
            if i > n:
                break
            pw = power(i + 1, n - i)
            if pw is None:
                continue
            term = a[i] * pw
            deriv = term if deriv is None else deriv + term
        cn = None
        if deriv is not None:
            cn = coeff_tilde(deriv)
            if cn.is_zero():
                cn = None
        c.append(cn)
    return c


def return_coeffs_transport(a: CoeffSeq, N: int) -> ReturnSeries:
    """Return-map coefficients from exact series transport along ``[0, T]``."""
    if N < 1:
        raise ValueError("order N must be >= 1")
    funcs = transport_functions(a, N)
    return ReturnSeries(tuple(ZERO if f is None else f.value_at(1) for f in funcs[1:]))


# -- numeric route -------------------------------------------------------------


def numeric_radius(a: CoeffSeq) -> float:
    """Conservative initial-value radius ``1 / (2 (1 + max_i sup|a_i|^{1/i}) T)``."""
    m = max((a[i].sup_bound() ** (1.0 / i) for i in a.support), default=0.0)
    return 1.0 / (2.0 * (1.0 + m) * TWO_PI)


def _compiled_pieces(a: CoeffSeq, indices: list[int]):
    lattice = a.lattice
    pieces = []
    for lo, hi in zip(lattice, lattice[1:]):
        fs = []
        for i in indices:
            f = a[i].refine(lattice)[lattice.index(lo)]
            fs.append((i, f.compiled()))
        pieces.append((float(lo) * TWO_PI, float(hi) * TWO_PI, fs))
    return pieces


def _rhs_factory(fs):
    def rhs(x, v):
        total = 0j
        for i, (coef, xp, fr) in fs:
            ai = np.sum(coef * x**xp * np.exp(1j * fr * x))
            total += ai * v[0] ** (i + 1)
        return [total]

    return rhs


def return_map_numeric(
    a: CoeffSeq,
    r: complex,
    N: int | None = None,
    *,
    method: str = "rk",
    rtol: float = 1e-12,
    atol: float = 1e-14,
) -> complex:
    """``v(T; r)`` by floating-point integration of the equation.

    ``N`` optionally drops coefficients ``a_i`` with ``i > N``. ``method="rk"``
    uses an adaptive 8th-order Dormand-Prince scheme restarted at every
    breakpoint; ``method="picard"`` runs plain Picard iteration on a grid and
    is meant for debugging only.
    """
    indices = [i for i in a.support if N is None or i <= N]
    if not indices:
        return complex(r)
    pieces = _compiled_pieces(a, indices)
    if method == "picard":
        return _picard(pieces, complex(r))
    if method != "rk":
        raise ValueError(f"unknown method {method!r}")
    v = complex(r)
    for lo, hi, fs in pieces:
        sol = solve_ivp(
            _rhs_factory(fs), (lo, hi), [v], method="DOP853", rtol=rtol, atol=atol
        )
        if sol.status != 0:
            raise NumericFailure(f"integration failed on [{lo:.6g}, {hi:.6g}]: {sol.message}")
        v = complex(sol.y[0, -1])
        if not np.isfinite(v.real) or not np.isfinite(v.imag) or abs(v) > 1e6 * max(abs(r), 1e-300):
            raise NumericFailure(f"solution blew up near x = {hi:.6g}; reduce r")
    return v


def _picard(pieces, r: complex, points: int = 4001, max_iter: int = 500) -> complex:
    v0 = r
    for lo, hi, fs in pieces:
        x = np.linspace(lo, hi, points)
        coeffs = [(i, np.array([np.sum(c * xx**p * np.exp(1j * m * xx)) for xx in x]))
                  for i, (c, p, m) in fs]
        v = np.full_like(x, v0, dtype=complex)
        for _ in range(max_iter):
            integrand = sum(ai * v ** (i + 1) for i, ai in coeffs)
            new = v0 + cumulative_simpson(integrand.real, x=x, initial=0) + 1j * cumulative_simpson(
                integrand.imag, x=x, initial=0
            )
            if not np.all(np.isfinite(new)):
                raise NumericFailure("Picard iteration diverged")
            delta = np.max(np.abs(new - v))
            v = new
            if delta <= 1e-15 * max(abs(v0), 1e-300):
                break
        else:
            raise NumericFailure("Picard iteration did not converge")
        v0 = complex(v[-1])
    return v0


# -- verdicts ------------------------------------------------------------------


@dataclass(frozen=True)
class CenterVerdict:
    order_checked: int
    is_center_up_to_N: bool
    first_nonzero: tuple[int, Scalar] | None
    is_universal_up_to_N: bool
    evidence: list[tuple[str, Scalar]] = field(default_factory=list)
    words_checked: int = 0
    series: ReturnSeries | None = None


def center_check(a: CoeffSeq, N: int) -> CenterVerdict:
    """Order-``N`` certificate: ``c_1 = ... = c_N = 0`` and, separately, all ``I_w = 0``."""
    if N < 1:
        raise ValueError("order N must be >= 1")
    it = return_coeffs_iterated(a, N)
    tr = return_coeffs_transport(a, N)
    if it != tr:
        bad = next(n for n in range(1, N + 1) if it.c(n) != tr.c(n))
        raise CrossCheckError(
            f"c_{bad} differs between routes: {it.c(bad).render()} vs {tr.c(bad).render()}"
        )
    first = next(((n, it.c(n)) for n in range(1, N + 1) if it.c(n)), None)
    ev = _evaluator(a)
    words = words_up_to(N, a.support)
    universal = all(ev(w).is_zero() for w in words)
    if universal and first is not None:
        raise CrossCheckError("all iterated integrals vanish but some c_n does not")
    evidence = [(f"c_{n}", it.c(n)) for n in range(1, N + 1)]
    return CenterVerdict(
        order_checked=N,
        is_center_up_to_N=first is None,
        first_nonzero=first,
        is_universal_up_to_N=universal,
        evidence=evidence,
        words_checked=len(words),
        series=it,
    )
