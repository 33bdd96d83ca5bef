"""Canonical frames for matrix pairs and conjugacy certificates.

A pair (g1, g2) without a common fixed point is conjugated to a canonical
frame: g1 becomes diag(rho, 1/rho) (or the standard parabolic +-(1,1;0,1))
and g2 gets lower-left entry 1 (or becomes +-(1,0;lambda,1) when both are
parabolic).  The frame is a function of the three traces tr(g1), tr(g2),
tr(g1 g2) alone, which is what makes trace-matched pairs conjugate: the
conjugator between two pairs is N_h^-1 N_g for their two frame maps.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import (
    ConjugationFailedError,
    DegenerateFrameError,
    IdentityArgumentError,
    MixedParabolicPairError,
    SharedFixedPointError,
    TraceMismatchError,
)
from .sl2 import (
    ENTRY_TOL,
    INFINITY,
    TRACE_TOL,
    Mat2C,
    fixed_points,
    inverse,
    is_plus_minus_identity,
    max_entry_diff,
    mul,
    shares_fixed_point,
    trace,
)

DIAGONAL = "diagonal"
PARABOLIC = "parabolic"


@dataclass(frozen=True)
class CanonicalPair:
    """A conjugated pair in canonical position.

    conjugator: C with C g1 C^-1 = h1 and C g2 C^-1 = h2 (within 10*entry_tol)
    h1: diag(rho, 1/rho), or eps*(1,1;0,1) in the parabolic branch
    h2: lower-left entry 1, or eps2*(1,0;lambda,1) in the parabolic branch
    rho: eigenvalue of h1 with |rho| >= 1 (rho = eps = +-1 when parabolic)
    branch: "diagonal" or "parabolic"
    """

    conjugator: Mat2C
    h1: Mat2C
    h2: Mat2C
    rho: complex
    branch: str

    @property
    def parabolic_lambda(self) -> complex:
        """lambda of the parabolic frame h2 = eps2*(1,0;lambda,1)."""
        if self.branch != PARABOLIC:
            raise ValueError("lambda is only defined for the parabolic branch")
        return self.h2.c / self.h2.a


def _is_parabolic_trace(t: complex, tol: float = TRACE_TOL) -> bool:
    return min(abs(t - 2), abs(t + 2)) <= tol


def rho_from_trace(t: complex) -> complex:
    """The root of rho^2 - t*rho + 1 = 0 with |rho| >= 1.

    When both roots lie on the unit circle (elliptic trace) the root with
    argument in [0, pi) is chosen, so the branch is deterministic.
    """
    disc = cmath.sqrt(t * t - 4)
    r1 = (t + disc) / 2
    r2 = (t - disc) / 2
    if abs(abs(r1) - abs(r2)) > 1e-9:
        return r1 if abs(r1) > abs(r2) else r2
    return r1 if 0 <= cmath.phase(r1) < cmath.pi else r2


def _renormalize_det(a, b, c, d) -> Mat2C:
    # Divide by a square root of the determinant so drift does not
    # accumulate through composed conjugations.
    det = a * d - b * c
    if det == 0:
        raise DegenerateFrameError("singular conjugator")
    s = cmath.sqrt(det)
    return Mat2C(a / s, b / s, c / s, d / s)


def _conjugate(c: Mat2C, g: Mat2C) -> Mat2C:
    return mul(mul(c, g), inverse(c))


def _eigenvector(g: Mat2C, lam: complex) -> tuple[complex, complex]:
    # Rows of (g - lam I) give two parallel candidates; take the larger.
    v1 = (-g.b, g.a - lam)
    v2 = (g.d - lam, -g.c)
    n1 = abs(v1[0]) + abs(v1[1])
    n2 = abs(v2[0]) + abs(v2[1])
    if max(n1, n2) <= ENTRY_TOL:
        raise DegenerateFrameError(f"no eigenvector for eigenvalue {lam!r}")
    return v1 if n1 >= n2 else v2


def _diagonal_branch(g1: Mat2C, g2: Mat2C) -> CanonicalPair:
    rho = rho_from_trace(trace(g1))
    v1 = _eigenvector(g1, rho)
    v2 = _eigenvector(g1, 1 / rho)
    # Columns of P are the rho- and 1/rho-eigenvectors; Q = P^-1 sends the
    # fixed points to infinity and 0.
    p = _renormalize_det(v1[0], v2[0], v1[1], v2[1])
    q = inverse(p)
    g2q = _conjugate(q, g2)
    if abs(g2q.c) <= ENTRY_TOL:
        # g2 fixes infinity in the new frame, i.e. shares a fixed point
        # with g1 beyond what the commutator test resolved.
        raise SharedFixedPointError(
            "second element fixes an eigendirection of the first"
        )
    s = cmath.sqrt(g2q.c)
    conj = _renormalize_det(s * q.a, s * q.b, q.c / s, q.d / s)
    h2 = _conjugate(conj, g2)
    h2 = Mat2C(h2.a, h2.b, 1, h2.d)  # exact by construction; snap rounding
    h1 = Mat2C(rho, 0, 0, 1 / rho)
    return CanonicalPair(conjugator=conj, h1=h1, h2=h2, rho=rho, branch=DIAGONAL)


def _single_fixed_point(g: Mat2C):
    fps = fixed_points(g)
    if len(fps.points) != 1:
        raise DegenerateFrameError("expected a parabolic fixed point")
    return fps.points[0]


def _moebius_to_inf_zero(p1, p2) -> Mat2C:
    """A determinant-1 map sending p1 to infinity and p2 to 0."""
    if p1 is INFINITY:
        return Mat2C(1, -p2, 0, 1)
    if p2 is INFINITY:
        return _renormalize_det(0, 1, 1, -p1)
    return _renormalize_det(1, -p2, 1, -p1)


def _parabolic_branch(g1: Mat2C, g2: Mat2C) -> CanonicalPair:
    eps1 = 1 if abs(trace(g1) - 2) <= abs(trace(g1) + 2) else -1
    eps2 = 1 if abs(trace(g2) - 2) <= abs(trace(g2) + 2) else -1
    m = _moebius_to_inf_zero(_single_fixed_point(g1), _single_fixed_point(g2))
    g1m = _conjugate(m, g1)
    beta = g1m.b / eps1
    if abs(beta) <= ENTRY_TOL:
        raise IdentityArgumentError("first element is +-I")
    mu = 1 / cmath.sqrt(beta)
    conj = _renormalize_det(mu * m.a, mu * m.b, m.c / mu, m.d / mu)
    h2c = _conjugate(conj, g2)
    if max(abs(h2c.a - eps2), abs(h2c.b), abs(h2c.d - eps2)) > 1e3 * ENTRY_TOL:
        raise DegenerateFrameError("parabolic frame did not close up")
    lam = h2c.c
    h1 = Mat2C(eps1, eps1, 0, eps1)
    h2 = Mat2C(eps2, 0, lam, eps2)
    return CanonicalPair(conjugator=conj, h1=h1, h2=h2, rho=eps1, branch=PARABOLIC)


def normalize_pair(
    g1: Mat2C,
    g2: Mat2C,
    *,
    trace_tol: float = TRACE_TOL,
    entry_tol: float = ENTRY_TOL,
) -> CanonicalPair:
    """Conjugate (g1, g2) to canonical position.

    Diagonal branch when tr(g1) != +-2; parabolic branch when both traces
    are +-2.  A parabolic g1 with a non-parabolic g2 has no canonical frame
    of either shape; callers should swap the pair (conjugator_between does).

    Raises IdentityArgumentError, SharedFixedPointError, or
    MixedParabolicPairError accordingly.
    """
    if is_plus_minus_identity(g1, tol=entry_tol) or is_plus_minus_identity(
        g2, tol=entry_tol
    ):
        raise IdentityArgumentError("cannot normalize a pair containing +-I")
    if shares_fixed_point(g1, g2, trace_tol=trace_tol):
        raise SharedFixedPointError("elements share a fixed point")
    t1 = trace(g1)
    if not _is_parabolic_trace(t1, tol=trace_tol):
        return _diagonal_branch(g1, g2)
    if _is_parabolic_trace(trace(g2), tol=trace_tol):
        return _parabolic_branch(g1, g2)
    raise MixedParabolicPairError(
        "tr(g1) = +-2 but tr(g2) != +-2; normalize the swapped pair instead"
    )


def conjugator_between(
    g1: Mat2C, g2: Mat2C, h1: Mat2C, h2: Mat2C, *, trace_tol: float = TRACE_TOL
) -> Mat2C:
    """The matrix A with A g_i A^-1 = h_i, for trace-matched pairs.

    Requires tr(g1) = tr(h1), tr(g2) = tr(h2) and tr(g1 g2) = tr(h1 h2),
    with neither pair sharing a fixed point.  The canonical frame of a pair
    is determined by those three traces, so both pairs normalize to the
    same frame and A = N_h^-1 N_g conjugates one onto the other (A is
    well defined up to sign).
    """
    checks = (
        ("tr(g1)", trace(g1), trace(h1)),
        ("tr(g2)", trace(g2), trace(h2)),
        ("tr(g1*g2)", trace(mul(g1, g2)), trace(mul(h1, h2))),
    )
    for which, lhs, rhs in checks:
        if abs(lhs - rhs) > trace_tol:
            raise TraceMismatchError(which, lhs, rhs)
    if _is_parabolic_trace(trace(g1)) and not _is_parabolic_trace(trace(g2)):
        g1, g2, h1, h2 = g2, g1, h2, h1
    ng = normalize_pair(g1, g2)
    nh = normalize_pair(h1, h2)
    raw = mul(inverse(nh.conjugator), ng.conjugator)
    a = _renormalize_det(raw.a, raw.b, raw.c, raw.d)
    scale = 1 + max(
        max(abs(v) for v in h.entries()) for h in (h1, h2)
    )
    for g, h in ((g1, h1), (g2, h2)):
        if max_entry_diff(_conjugate(a, g), h) > 1e-6 * scale:
            raise ConjugationFailedError(
                "computed conjugator failed verification; "
                "pair traces are borderline"
            )
    return a


def solve_frame_entries(
    rho: complex,
    a: complex,
    b: complex,
    d: complex,
    t_g: complex,
    t_g1g: complex,
    t_g2g: complex,
    t_g1g2g: complex,
) -> Mat2C:
    """Entries of g = (w x; y z) from four traces against a diagonal frame.

    The frame is h1 = diag(rho, 1/rho), h2 = (a b; 1 d).  The equations

        w + z                              = tr(g)
        rho w + z/rho                      = tr(h1 g)
        a w + b y + x + d z                = tr(h2 g)
        rho(a w + b y) + (x + d z)/rho     = tr(h1 h2 g)

    split into two 2x2 systems with the same matrix ((1,1),(rho,1/rho)),
    nonsingular iff rho^2 != 1; b != 0 recovers y.  The determinant of the
    result is NOT constrained -- the caller must validate it.
    """
    delta = 1 / rho - rho
    if abs(delta) <= ENTRY_TOL or abs(b) <= ENTRY_TOL:
        raise DegenerateFrameError("frame cannot separate entries")

    def solve2(r1: complex, r2: complex) -> tuple[complex, complex]:
        return ((r1 / rho - r2) / delta, (r2 - r1 * rho) / delta)

    w, z = solve2(t_g, t_g1g)
    c1 = t_g2g - a * w - d * z
    c2 = t_g1g2g - rho * a * w - d * z / rho
    by, x = solve2(c1, c2)
    return Mat2C(w, x, by / b, z, check_det=False)


def match_third_element(
    frame: CanonicalPair,
    t_g: complex,
    t_g1g: complex,
    t_g2g: complex,
    t_g1g2g: complex,
) -> Mat2C:
    """The unique matrix with the four given traces against a frame.

    The traces are tr(g), tr(h1 g), tr(h2 g), tr(h1 h2 g).  Requires a
    diagonal-branch frame with rho^4 != 1 and b != 0 (DegenerateFrameError
    otherwise).  The result's determinant is not constrained; the caller
    must validate it, as reconstruction does.
    """
    if frame.branch != DIAGONAL:
        raise DegenerateFrameError("entry matching needs a diagonal frame")
    rho = frame.rho
    if abs(rho ** 4 - 1) <= 1e3 * ENTRY_TOL:
        raise DegenerateFrameError("rho^4 = 1: singular matching system")
    if abs(frame.h2.b) <= ENTRY_TOL:
        raise DegenerateFrameError("frame has b = 0")
    return solve_frame_entries(
        rho, frame.h2.a, frame.h2.b, frame.h2.d, t_g, t_g1g, t_g2g, t_g1g2g
    )
