"""Numeric core: 2x2 complex matrices of determinant 1.

Entries are plain Python complex numbers; exactness in this package lives in
the integer coefficients of trace polynomials, not here.  All values are
immutable and safe to share between threads.

The point at infinity of the Riemann sphere is the distinguished sentinel
`INFINITY`, never an encoded large number.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable

from .errors import (
    DeterminantError,
    IdentityArgumentError,
    IndexOutOfRangeError,
)

# Absolute tolerances.  Double precision leaves several digits of headroom
# for products of a dozen desk-scale matrices.
ENTRY_TOL = 1e-9
TRACE_TOL = 1e-8
DET_TOL = 1e-9


class _Infinity:
    """The point at infinity on the Riemann sphere (a unique sentinel)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


class Mat2C:
    """A 2x2 complex matrix (a b; c d) with determinant 1.

    The constructor rejects non-finite entries and, unless ``check_det`` is
    disabled, any determinant further than ``det_tol`` from 1.
    ``check_det=False`` exists for operations whose result is explicitly not
    determinant-constrained (entry matching from traces); such matrices must
    be validated by the caller.

    >>> m = Mat2C(3, 0, 0, 1/3)
    >>> m.trace()
    (3.3333333333333335+0j)
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, *, check_det: bool = True, det_tol: float = DET_TOL):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        if not (_finite(a) and _finite(b) and _finite(c) and _finite(d)):
            raise DeterminantError("matrix entries must be finite")
        if check_det:
            det = a * d - b * c
            # The tolerance scales with the magnitude against which ad - bc
            # cancels: at desk scale this is the absolute det_tol, while for
            # products of many matrices it tracks what double precision can
            # actually represent.
            scale = 1.0 + abs(a) * abs(d) + abs(b) * abs(c)
            if abs(det - 1.0) > det_tol * scale:
                raise DeterminantError(
                    f"determinant {det!r} is not 1 within {det_tol:g} "
                    f"(scale {scale:.3g})"
                )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Mat2C is immutable")

    def __repr__(self):
        return f"Mat2C({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    def entries(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def trace(self) -> complex:
        return self.a + self.d

    def apply(self, z):
        """Act on a point of the Riemann sphere as (az+b)/(cz+d)."""
        if z is INFINITY:
            if abs(self.c) <= ENTRY_TOL:
                return INFINITY
            return self.a / self.c
        w = self.c * z + self.d
        if abs(w) <= ENTRY_TOL:
            return INFINITY
        return (self.a * z + self.b) / w


IDENTITY = Mat2C(1, 0, 0, 1)


def mul(x: Mat2C, y: Mat2C) -> Mat2C:
    """Matrix product x @ y."""
    return Mat2C(
        x.a * y.a + x.b * y.c,
        x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c,
        x.c * y.b + x.d * y.d,
        det_tol=2 * DET_TOL,
    )


def trace(x: Mat2C) -> complex:
    return x.a + x.d


def inverse(x: Mat2C) -> Mat2C:
    """Inverse via the determinant-1 adjugate (d, -b; -c, a)."""
    return Mat2C(x.d, -x.b, -x.c, x.a, det_tol=2 * DET_TOL)


def power(x: Mat2C, k: int) -> Mat2C:
    """x**k for any integer k (word exponents are small; no fast powering)."""
    if k < 0:
        return power(inverse(x), -k)
    result = IDENTITY
    for _ in range(k):
        result = mul(result, x)
    return result


def max_entry_diff(x: Mat2C, y: Mat2C) -> float:
    return max(
        abs(x.a - y.a), abs(x.b - y.b), abs(x.c - y.c), abs(x.d - y.d)
    )


def is_plus_minus_identity(g: Mat2C, tol: float = ENTRY_TOL) -> bool:
    plus = max(abs(g.a - 1), abs(g.b), abs(g.c), abs(g.d - 1))
    minus = max(abs(g.a + 1), abs(g.b), abs(g.c), abs(g.d + 1))
    return min(plus, minus) <= tol


class FixedPointKind(enum.Enum):
    TWO_POINTS = "two-points"
    ONE_POINT = "one-point"
    IDENTITY = "identity"


class FixedPointSet:
    """Fixed points of a linear fractional transformation.

    `points` holds up to two values, each a complex number or INFINITY.
    TWO_POINTS corresponds to trace != +-2, ONE_POINT to a nonidentity
    parabolic (trace +-2), IDENTITY to g = +-I.
    """

    __slots__ = ("kind", "points")

    def __init__(self, kind: FixedPointKind, points: tuple):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "points", tuple(points))

    def __setattr__(self, name, value):
        raise AttributeError("FixedPointSet is immutable")

    def __repr__(self):
        return f"FixedPointSet({self.kind.value}, {self.points!r})"


def fixed_points(g: Mat2C) -> FixedPointSet:
    """Fixed points of z -> (az+b)/(cz+d).

    Finite fixed points are roots of c z^2 + (d-a) z - b = 0; infinity is
    fixed exactly when c = 0.  The quadratic's discriminant equals
    trace(g)^2 - 4, so the one/two point split is decided by the trace.
    """
    if is_plus_minus_identity(g):
        return FixedPointSet(FixedPointKind.IDENTITY, ())
    t = trace(g)
    parabolic = min(abs(t - 2), abs(t + 2)) <= TRACE_TOL
    if parabolic:
        if abs(g.c) <= ENTRY_TOL:
            return FixedPointSet(FixedPointKind.ONE_POINT, (INFINITY,))
        return FixedPointSet(FixedPointKind.ONE_POINT, ((g.a - g.d) / (2 * g.c),))
    if abs(g.c) <= ENTRY_TOL:
        # Affine map fixing infinity; the second point solves (d-a) z = b.
        return FixedPointSet(
            FixedPointKind.TWO_POINTS, (g.b / (g.d - g.a), INFINITY)
        )
    disc = (g.d - g.a) ** 2 + 4 * g.b * g.c
    root = disc ** 0.5
    p1 = ((g.a - g.d) - root) / (2 * g.c)
    p2 = ((g.a - g.d) + root) / (2 * g.c)
    return FixedPointSet(FixedPointKind.TWO_POINTS, (p1, p2))


def shares_fixed_point(g1: Mat2C, g2: Mat2C, *, trace_tol: float = TRACE_TOL) -> bool:
    """True iff g1 and g2 have a common fixed point.

    Uses the commutator criterion: the pair shares a fixed point exactly
    when tr(g1 g2 g1^-1 g2^-1) = 2.  For g1 = diag(rho, 1/rho) this trace
    equals 2 - bc (rho - 1/rho)^2, whose zero set is bc = 0.
    """
    if is_plus_minus_identity(g1) or is_plus_minus_identity(g2):
        raise IdentityArgumentError("shares_fixed_point is undefined for +-I")
    comm = mul(mul(g1, g2), mul(inverse(g1), inverse(g2)))
    return abs(trace(comm) - 2) <= trace_tol


def evaluate_word(word, images: list[Mat2C]) -> Mat2C:
    """Evaluate a free word at matrix images of its generators.

    Generator i (1-based) maps to images[i-1]; exponents are applied as
    matrix powers.  Raises IndexOutOfRangeError when the word mentions a
    generator beyond the image list.
    """
    result = IDENTITY
    for gen, exp in word.syllables:
        if gen > len(images):
            raise IndexOutOfRangeError(
                f"word uses generator {gen} but only {len(images)} images given"
            )
        result = mul(result, power(images[gen - 1], exp))
    return result


# ---------------------------------------------------------------------------
# JSON encoding: a complex number is [re, im]; a matrix is
# [[[re,im],[re,im]],[[re,im],[re,im]]] in row-major order.

def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(obj) -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
    ):
        raise ValueError(f"expected [re, im], got {obj!r}")
    return complex(obj[0], obj[1])


def mat_to_json(m: Mat2C) -> list:
    return [
        [complex_to_json(m.a), complex_to_json(m.b)],
        [complex_to_json(m.c), complex_to_json(m.d)],
    ]


def mat_from_json(obj) -> Mat2C:
    """Decode a matrix, rejecting it if the determinant check fails."""
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or any(not isinstance(row, (list, tuple)) or len(row) != 2 for row in obj)
    ):
        raise ValueError(f"expected a 2x2 matrix, got {obj!r}")
    (a, b), (c, d) = obj
    return Mat2C(
        complex_from_json(a),
        complex_from_json(b),
        complex_from_json(c),
        complex_from_json(d),
    )


def random_sl2(rng) -> Mat2C:
    """Random SL(2,C) element for property tests.

    a, b, c are uniform in the complex box [-2,2]^2 with |a| >= 0.1
    (rejection), and d = (1+bc)/a, so the determinant is 1 up to rounding
    without a near-singular division.
    """

    def box() -> complex:
        return complex(rng.uniform(-2, 2), rng.uniform(-2, 2))

    while True:
        a = box()
        if abs(a) >= 0.1:
            break
    b = box()
    c = box()
    return Mat2C(a, b, c, (1 + b * c) / a)
