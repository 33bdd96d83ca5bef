"""Reconstruction of a generator tuple from reduced trace coordinates.

With (A1, A2) sharing no fixed point, the 4n-5 traces

    t_i (i = 1..n),  t12,  and  t_1i, t_2i, t_12i (i = 3..n)

determine the group up to conjugation.  `reconstruct_group` builds the
canonical tuple (A1 diagonal, A2 with lower-left entry 1, each further
generator solved from four linear trace equations) and validates the unit
determinants that realizability imposes; coordinates that no SL(2,C) tuple
realizes surface as InconsistentCoordinatesError rather than being
repaired.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AllParabolicError,
    CoordinateSetError,
    InconsistentCoordinatesError,
    ParabolicFirstGeneratorError,
    SharedFixedPointDataError,
    SharedFixedPointError,
)
from .normalize import (
    DIAGONAL,
    CanonicalPair,
    rho_from_trace,
    solve_frame_entries,
)
from .sl2 import (
    ENTRY_TOL,
    IDENTITY,
    TRACE_TOL,
    Mat2C,
    inverse,
    mul,
    shares_fixed_point,
    trace,
)
from .tracepoly import BasisVar, TracePoly, reduce_trace, var_name
from .words import FreeWord

RECON_TOL = 1e-7

IDENTITY_SWAP = "identity"
SWAP_FIRST_TWO = "swap-first-two"
PRODUCT_SWAP = "product-inverse"


def theorem3_vars(n: int) -> list[BasisVar]:
    """The reduced coordinate set: 4n-5 variables for n >= 2, {t1} for n=1."""
    if n < 1:
        raise ValueError("need at least one generator")
    out: list[BasisVar] = [(i,) for i in range(1, n + 1)]
    if n >= 2:
        out.append((1, 2))
    for i in range(3, n + 1):
        out.extend([(1, i), (2, i), (1, 2, i)])
    return out


@dataclass(frozen=True)
class TraceCoordinates:
    """Values for exactly the reduced coordinate set of a given n."""

    n: int
    values: dict[BasisVar, complex]

    def __post_init__(self):
        expected = set(theorem3_vars(self.n))
        got = set(self.values)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise CoordinateSetError(
                "coordinate keys do not match the reduced set: "
                f"missing {[var_name(v) for v in missing]}, "
                f"extra {[var_name(v) for v in extra]}"
            )

    def __getitem__(self, key: BasisVar) -> complex:
        return self.values[key]


@dataclass(frozen=True)
class ReconstructedGroup:
    """Canonical-frame generators plus per-generator determinant residuals."""

    generators: list[Mat2C]
    frame: CanonicalPair | None
    residuals: list[float]


def _word_trace(images: list[Mat2C], indices: tuple[int, ...]) -> complex:
    m = IDENTITY
    for i in indices:
        m = mul(m, images[i - 1])
    return trace(m)


def extract_coordinates(generators: list[Mat2C]) -> TraceCoordinates:
    """The reduced coordinate vector of a concrete generator tuple.

    For n >= 2 the first two generators must not share a fixed point
    (SharedFixedPointError otherwise).
    """
    n = len(generators)
    if n == 0:
        raise ValueError("need at least one generator")
    if n >= 2 and shares_fixed_point(generators[0], generators[1]):
        raise SharedFixedPointError("A1 and A2 share a fixed point")
    values = {
        var: _word_trace(generators, var) for var in theorem3_vars(n)
    }
    return TraceCoordinates(n=n, values=values)


def _is_parabolic(t: complex) -> bool:
    return min(abs(t - 2), abs(t + 2)) <= TRACE_TOL


def reconstruct_group(
    coords: TraceCoordinates,
    *,
    trace_tol: float = TRACE_TOL,
    entry_tol: float = ENTRY_TOL,
    recon_tol: float = RECON_TOL,
) -> ReconstructedGroup:
    """Build canonical generators realizing the coordinates.

    Raises ParabolicFirstGeneratorError when t1 = +-2 (re-run after
    swap_roles), SharedFixedPointDataError when the coordinates force
    b = 0 (the hypothesis that A1, A2 share no fixed point fails), and
    InconsistentCoordinatesError when some solved generator violates
    det = 1 beyond recon_tol -- such coordinates are realizable by no
    SL(2,C) tuple.
    """
    n = coords.n
    t1 = coords[(1,)]
    if min(abs(t1 - 2), abs(t1 + 2)) <= trace_tol:
        raise ParabolicFirstGeneratorError(
            f"t1 = {t1!r}: swap generator roles before reconstructing"
        )
    rho = rho_from_trace(t1)
    a1 = Mat2C(rho, 0, 0, 1 / rho)
    gens = [a1]
    residuals = [abs(a1.det() - 1)]
    frame = None
    if n >= 2:
        t2, t12 = coords[(2,)], coords[(1, 2)]
        delta = 1 / rho - rho
        a = (t2 / rho - t12) / delta
        d = (t12 - t2 * rho) / delta
        b = a * d - 1
        if abs(b) <= entry_tol:
            raise SharedFixedPointDataError(
                "coordinates imply A1 and A2 share a fixed point (b = 0)"
            )
        a2 = Mat2C(a, b, 1, d)
        gens.append(a2)
        residuals.append(abs(a2.det() - 1))
        frame = CanonicalPair(
            conjugator=IDENTITY, h1=a1, h2=a2, rho=rho, branch=DIAGONAL
        )
        for i in range(3, n + 1):
            ai = solve_frame_entries(
                rho,
                a,
                b,
                d,
                coords[(i,)],
                coords[(1, i)],
                coords[(2, i)],
                coords[(1, 2, i)],
            )
            residual = abs(ai.det() - 1)
            if residual > recon_tol:
                raise InconsistentCoordinatesError(i, residual)
            gens.append(ai)
            residuals.append(residual)
    return ReconstructedGroup(generators=gens, frame=frame, residuals=residuals)


# ---------------------------------------------------------------------------
# Generator-role swaps for a parabolic first generator.
#
# When t1 = +-2 the reconstruction frame does not exist as stated, but the
# problem can be relabeled: use (A2, A1) when t2 != +-2, or (A1A2, A2^-1)
# when only tr(A1A2) != +-2.  The coordinate set of the new labels is a
# polynomial consequence of the old one; the polynomials are produced by
# reduce_trace on the new-label words written over the old generators.

_SWAP_WORDS = {
    SWAP_FIRST_TWO: {
        "g1": ((2, 1),),
        "g2": ((1, 1),),
    },
    PRODUCT_SWAP: {
        "g1": ((1, 1), (2, 1)),
        "g2": ((2, -1),),
    },
}


def _new_label_words(kind: str, n: int) -> dict[BasisVar, FreeWord]:
    """Each new-label coordinate word, expressed over the old generators."""
    b1 = _SWAP_WORDS[kind]["g1"]
    b2 = _SWAP_WORDS[kind]["g2"]

    def image(var: BasisVar) -> FreeWord:
        syls: tuple = ()
        for i in var:
            syls += b1 if i == 1 else b2 if i == 2 else ((i, 1),)
        return FreeWord(syls)

    return {var: image(var) for var in theorem3_vars(n)}


def swap_roles(data):
    """Relabel so the first element has trace != +-2.

    Accepts either TraceCoordinates or a sequence of matrices and returns
    (kind, relabeled data) where kind is one of "identity",
    "swap-first-two" ((A2, A1, A3, ...)) or "product-inverse"
    ((A1A2, A2^-1, A3, ...)).  Raises AllParabolicError when none of
    A1, A2, A1A2 has trace != +-2.
    """
    if isinstance(data, TraceCoordinates):
        return _swap_coordinates(data)
    return _swap_generators(list(data))


def _pick_kind(t1: complex, t2: complex, t12: complex) -> str:
    if not _is_parabolic(t1):
        return IDENTITY_SWAP
    if not _is_parabolic(t2):
        return SWAP_FIRST_TWO
    if not _is_parabolic(t12):
        return PRODUCT_SWAP
    raise AllParabolicError(
        "A1, A2 and A1A2 all have trace +-2; no role swap applies"
    )


def _swap_coordinates(coords: TraceCoordinates):
    n = coords.n
    if n < 2:
        raise ParabolicFirstGeneratorError(
            "a single parabolic generator cannot be relabeled"
        )
    kind = _pick_kind(coords[(1,)], coords[(2,)], coords[(1, 2)])
    if kind == IDENTITY_SWAP:
        return kind, coords
    new_values = {}
    for var, word in _new_label_words(kind, n).items():
        poly = reduce_trace(word, n)
        new_values[var] = poly.evaluate(coords.values)
    return kind, TraceCoordinates(n=n, values=new_values)


def _swap_generators(gens: list[Mat2C]):
    if len(gens) < 2:
        raise ParabolicFirstGeneratorError(
            "a single parabolic generator cannot be relabeled"
        )
    a1, a2 = gens[0], gens[1]
    kind = _pick_kind(trace(a1), trace(a2), trace(mul(a1, a2)))
    if kind == IDENTITY_SWAP:
        return kind, list(gens)
    if kind == SWAP_FIRST_TWO:
        return kind, [a2, a1, *gens[2:]]
    return kind, [mul(a1, a2), inverse(a2), *gens[2:]]


def undo_swap(kind: str, gens: list[Mat2C]) -> list[Mat2C]:
    """Map generators of the relabeled tuple back to the original labels."""
    if kind == IDENTITY_SWAP:
        return list(gens)
    b1, b2 = gens[0], gens[1]
    if kind == SWAP_FIRST_TWO:
        return [b2, b1, *gens[2:]]
    if kind == PRODUCT_SWAP:
        # B1 = A1 A2 and B2 = A2^-1, so A1 = B1 B2 and A2 = B2^-1.
        return [mul(b1, b2), inverse(b2), *gens[2:]]
    raise ValueError(f"unknown swap kind {kind!r}")
