"""Relator trace equations: tr(W) = +-2 solved for one basis trace.

A relator word W imposes tr(W(images)) = +-2.  Since tr(W) is a polynomial
in the basis traces, the equation can be solved locally for one trace in
terms of the others whenever the corresponding partial derivative is
nonzero -- that is the chart-point proviso, and `proviso_scan` evaluates
every partial so callers can pick a solvable variable.  `solve_for_variable`
runs damped Newton iteration on the single-variable restriction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .errors import (
    MissingVariableError,
    NoConvergenceError,
    TargetAbsentError,
    ZeroDerivativeError,
)
from .tracepoly import BasisVar, TracePoly, reduce_trace, var_name
from .words import FreeWord

NEWTON_TOL = 1e-12
PROVISO_TOL = 1e-8
MAX_ITER = 60


class RelatorSign(enum.Enum):
    """Whether the relator is W = I (trace 2) or W = -I (trace -2).

    The sign is modeling input: it is not derivable from the word alone.
    """

    PLUS2 = 2
    MINUS2 = -2


def differentiate(p: TracePoly, v: BasisVar) -> TracePoly:
    """Exact formal partial derivative with respect to one basis variable."""
    terms: dict = {}
    for mono, coeff in p.terms.items():
        exps = dict(mono)
        e = exps.get(v, 0)
        if e == 0:
            continue
        if e == 1:
            del exps[v]
        else:
            exps[v] = e - 1
        key = tuple(exps.items())
        terms[key] = terms.get(key, 0) + coeff * e
    return TracePoly.from_terms(terms)


def proviso_scan(
    p: TracePoly, values: Mapping[BasisVar, complex]
) -> dict[BasisVar, complex]:
    """Every partial derivative of p evaluated at the point.

    Callers use the nonzero entries to pick a variable that can be
    eliminated locally (a chart coordinate).
    """
    return {v: differentiate(p, v).evaluate(values) for v in values}


@dataclass(frozen=True)
class RelatorEquation:
    """tr(word) = sign, to be solved for target_var given the other traces."""

    word: FreeWord
    sign: RelatorSign
    poly: TracePoly
    target_var: BasisVar
    fixed_values: dict[BasisVar, complex]

    @classmethod
    def build(
        cls,
        word: FreeWord,
        sign: RelatorSign,
        target_var: BasisVar,
        fixed_values: Mapping[BasisVar, complex],
        n: int | None = None,
    ) -> "RelatorEquation":
        poly = reduce_trace(word, n if n is not None else max(1, word.max_generator()))
        if target_var not in poly.variables():
            raise TargetAbsentError(
                f"{var_name(target_var)} does not occur in tr({word})"
            )
        return cls(
            word=word,
            sign=sign,
            poly=poly,
            target_var=target_var,
            fixed_values=dict(fixed_values),
        )


@dataclass(frozen=True)
class LocalSolution:
    value: complex
    residual: float
    derivative_at_solution: complex
    iterations: int


def _restrict(
    poly: TracePoly, target: BasisVar, fixed: Mapping[BasisVar, complex]
) -> list[complex]:
    """Coefficients (by ascending degree) of the univariate restriction."""
    coeffs: dict[int, complex] = {}
    for mono, coeff in poly.sorted_terms():
        value = complex(coeff)
        degree = 0
        for v, e in mono:
            if v == target:
                degree = e
                continue
            if v not in fixed:
                raise MissingVariableError(var_name(v))
            value *= complex(fixed[v]) ** e
        coeffs[degree] = coeffs.get(degree, 0) + value
    top = max(coeffs) if coeffs else 0
    return [coeffs.get(k, 0j) for k in range(top + 1)]


def _horner(coeffs: list[complex], x: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def solve_for_variable(
    eq: RelatorEquation,
    initial_guess: complex,
    *,
    newton_tol: float = NEWTON_TOL,
    proviso_tol: float = PROVISO_TOL,
    max_iter: int = MAX_ITER,
) -> LocalSolution:
    """Newton-solve the single-variable restriction of the relator equation.

    Damped steps (factor halved up to 8 times when |f| fails to decrease)
    polish until stagnation, so a multiple root is iterated all the way
    down and correctly reported as ZeroDerivativeError rather than passing
    as a chart point.  NoConvergenceError carries the last iterate.
    """
    if eq.target_var not in eq.poly.variables():
        raise TargetAbsentError(
            f"{var_name(eq.target_var)} does not occur in the relator polynomial"
        )
    coeffs = _restrict(eq.poly, eq.target_var, eq.fixed_values)
    coeffs[0] -= eq.sign.value
    deriv = [k * c for k, c in enumerate(coeffs)][1:]

    x = complex(initial_guess)
    fx = _horner(coeffs, x)
    iterations = 0
    for _ in range(max_iter):
        if fx == 0:
            break
        fpx = _horner(deriv, x)
        if fpx == 0:
            break
        step = fx / fpx
        alpha = 1.0
        moved = False
        for _ in range(9):
            xn = x - alpha * step
            fn = _horner(coeffs, xn)
            if abs(fn) < abs(fx):
                x, fx = xn, fn
                moved = True
                break
            alpha *= 0.5
        iterations += 1
        if not moved:
            break
    residual = abs(fx)
    if residual > newton_tol:
        raise NoConvergenceError(x, residual, iterations)
    derivative = _horner(deriv, x)
    if abs(derivative) <= proviso_tol:
        raise ZeroDerivativeError(x, derivative, residual, iterations)
    return LocalSolution(
        value=x,
        residual=residual,
        derivative_at_solution=derivative,
        iterations=iterations,
    )
