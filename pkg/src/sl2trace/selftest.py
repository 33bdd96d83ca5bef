"""Embedded invariant suites, runnable via the CLI `selftest` subcommand.

Each suite exercises one module's documented invariants on seeded random
data and returns a report; the full run is deterministic in the seed, so
two runs with the same seed produce byte-identical reports.  Failures
carry the offending words and matrices in JSON form for reproduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random

from . import sl2
from .errors import TraceEngineError, ZeroDerivativeError
from .homcheck import HomCandidate, VerdictKind, WordSet, check_trace_preserving, classify
from .normalize import conjugator_between, match_third_element, normalize_pair
from .reconstruct import extract_coordinates, reconstruct_group
from .relator import RelatorEquation, RelatorSign, differentiate, solve_for_variable
from .sampling import (
    conjugate,
    random_no_shared_pair,
    random_nonempty_word,
    random_parabolic_pair,
    random_sl2,
    random_word,
)
from .sl2 import (
    INFINITY,
    Mat2C,
    evaluate_word,
    fixed_points,
    inverse,
    mat_to_json,
    max_entry_diff,
    mul,
    shares_fixed_point,
    trace,
)
from .tracepoly import basis_for, reduce_trace
from .words import FreeWord


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    failures: list[dict] = field(default_factory=list)

    def check(self, ok: bool, label: str, **data):
        self.checks += 1
        if not ok:
            self.failures.append({"check": label, "data": data})

    @property
    def ok(self) -> bool:
        return not self.failures


def _jsonable(value):
    if isinstance(value, Mat2C):
        return mat_to_json(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, FreeWord):
        return str(value)
    return value


def _basis_values(mats):
    values = {}
    for subset in basis_for(len(mats)):
        m = sl2.IDENTITY
        for i in subset:
            m = mul(m, mats[i - 1])
        values[subset] = trace(m)
    return values


def _points_match(p, q) -> bool:
    if p is INFINITY or q is INFINITY:
        return p is q
    return abs(p - q) <= 1e-6 * (1 + abs(p))


def suite_sl2(rng: Random) -> SuiteReport:
    rep = SuiteReport("sl2-identities")
    # Fricke identity on 1000 random pairs.
    for _ in range(1000):
        x, y = random_sl2(rng), random_sl2(rng)
        lhs = trace(mul(x, y)) + trace(mul(inverse(x), y))
        rhs = trace(x) * trace(y)
        tol = 1e-8 * (1 + abs(trace(x)) * abs(trace(y)))
        rep.check(
            abs(lhs - rhs) <= tol,
            "fricke-identity",
            x=_jsonable(x),
            y=_jsonable(y),
        )
    # Trace is a class function.
    for _ in range(200):
        u, v = random_sl2(rng), random_sl2(rng)
        rep.check(
            abs(trace(conjugate(u, v)) - trace(v)) <= 1e-8 * (1 + abs(trace(v))),
            "conjugation-trace-invariance",
            u=_jsonable(u),
            v=_jsonable(v),
        )
    # 2 - tr[g1, g2] = bc (rho - 1/rho)^2 for diagonal g1.
    for _ in range(200):
        rho = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(rho) < 0.2:
            continue
        g1 = Mat2C(rho, 0, 0, 1 / rho)
        g2 = random_sl2(rng)
        comm = mul(mul(g1, g2), mul(inverse(g1), inverse(g2)))
        lhs = 2 - trace(comm)
        rhs = g2.b * g2.c * (rho - 1 / rho) ** 2
        rep.check(
            abs(lhs - rhs) <= 1e-8 * (1 + abs(rhs)),
            "commutator-formula",
            rho=_jsonable(rho),
            g2=_jsonable(g2),
        )
    # Determinant closure of products.
    for _ in range(200):
        m = mul(random_sl2(rng), random_sl2(rng))
        scale = 1 + abs(m.a) * abs(m.d) + abs(m.b) * abs(m.c)
        rep.check(
            abs(m.det() - 1) <= 2e-9 * scale, "mul-determinant", m=_jsonable(m)
        )
    # shares_fixed_point agrees with direct fixed-point intersection,
    # on generic pairs and on constructed shared-point pairs.
    for constructed in (False, True):
        for _ in range(120):
            if constructed:
                a = complex(rng.uniform(0.5, 2), rng.uniform(-0.5, 0.5))
                c = complex(rng.uniform(0.5, 2), rng.uniform(-0.5, 0.5))
                u = random_sl2(rng)
                g1 = conjugate(u, Mat2C(a, rng.uniform(-2, 2), 0, 1 / a))
                g2 = conjugate(u, Mat2C(c, rng.uniform(-2, 2), 0, 1 / c))
            else:
                g1, g2 = random_sl2(rng), random_sl2(rng)
            if sl2.is_plus_minus_identity(g1) or sl2.is_plus_minus_identity(g2):
                continue
            via_trace = shares_fixed_point(g1, g2)
            pts1 = fixed_points(g1).points
            pts2 = fixed_points(g2).points
            via_sets = any(_points_match(p, q) for p in pts1 for q in pts2)
            rep.check(
                via_trace == via_sets,
                "shared-point-agreement",
                g1=_jsonable(g1),
                g2=_jsonable(g2),
                constructed=constructed,
            )
    return rep


def suite_words(rng: Random) -> SuiteReport:
    rep = SuiteReport("word-forms")
    for _ in range(300):
        n = rng.randint(1, 5)
        w = random_nonempty_word(rng, n, 10)
        rep.check(FreeWord.parse(str(w)) == w, "parse-format-roundtrip", w=str(w))
        rep.check(
            w.inverse().length() == w.length(), "inverse-length", w=str(w)
        )
        rep.check(
            w.inverse().inverse() == w, "inverse-involution", w=str(w)
        )
        u = random_word(rng, n, 5)
        rep.check(
            (u * w * u.inverse()).cyclic_canonical() == w.cyclic_canonical(),
            "cyclic-conjugation-invariance",
            w=str(w),
            u=str(u),
        )
        rep.check(
            w.cyclic_canonical().representative.length() <= w.length(),
            "cyclic-reduction-shrinks",
            w=str(w),
        )
    return rep


def suite_tracepoly(rng: Random) -> SuiteReport:
    rep = SuiteReport("trace-reduction")
    # Symbolic-vs-numeric oracle.
    for _ in range(120):
        n = rng.randint(1, 4)
        w = random_word(rng, n, 12)
        poly = reduce_trace(w, n)
        for _ in range(2):
            mats = [random_sl2(rng) for _ in range(n)]
            direct = trace(evaluate_word(w, mats))
            symbolic = poly.evaluate(_basis_values(mats))
            rep.check(
                abs(symbolic - direct) <= 1e-7 * (1 + abs(direct)),
                "oracle-equivalence",
                w=str(w),
                mats=[_jsonable(m) for m in mats],
            )
    # Conjugation and inverse invariance are term-identical.
    for _ in range(150):
        n = rng.randint(1, 4)
        w = random_word(rng, n, 8)
        u = random_word(rng, n, 4)
        rep.check(
            reduce_trace(u * w * u.inverse(), n) == reduce_trace(w, n),
            "conjugation-invariance",
            w=str(w),
            u=str(u),
        )
        rep.check(
            reduce_trace(w.inverse(), n) == reduce_trace(w, n),
            "inverse-invariance",
            w=str(w),
        )
    # Fricke closure: term-identical over <= 2 generators (free character
    # ring); at n >= 3 normal forms may differ modulo trace relations, so
    # numeric equality is asserted instead.
    for _ in range(120):
        n = rng.randint(1, 3)
        x, y = random_word(rng, n, 5), random_word(rng, n, 5)
        lhs = reduce_trace(x * y, n) + reduce_trace(x.inverse() * y, n)
        rhs = reduce_trace(x, n) * reduce_trace(y, n)
        if max(x.max_generator(), y.max_generator()) <= 2:
            rep.check(lhs == rhs, "fricke-closure-termwise", x=str(x), y=str(y))
        elif lhs == rhs:
            rep.check(True, "fricke-closure-termwise", x=str(x), y=str(y))
        else:
            mats = [random_sl2(rng) for _ in range(n)]
            values = _basis_values(mats)
            l, r = lhs.evaluate(values), rhs.evaluate(values)
            rep.check(
                abs(l - r) <= 1e-6 * (1 + abs(r)),
                "fricke-closure-numeric",
                x=str(x),
                y=str(y),
            )
    # Proposition 1 closure: term-identical over <= 2 generators, and
    # term-identical or numerically equal beyond (same caveat as above).
    for _ in range(120):
        n = rng.randint(1, 4)
        w = random_word(rng, n, 6)
        a = FreeWord(((rng.randint(1, n), 1),))
        product = reduce_trace(a, n) * reduce_trace(w, n)
        sides = (
            reduce_trace(a * w, n) + reduce_trace(a.inverse() * w, n),
            reduce_trace(a * w.inverse(), n)
            + reduce_trace(a.inverse() * w.inverse(), n),
        )
        if max(w.max_generator(), a.max_generator()) <= 2:
            rep.check(
                all(side == product for side in sides),
                "proposition1-closure-termwise",
                a=str(a),
                w=str(w),
            )
            continue
        for side in sides:
            if side == product:
                rep.check(True, "proposition1-closure-termwise", a=str(a), w=str(w))
                continue
            mats = [random_sl2(rng) for _ in range(n)]
            values = _basis_values(mats)
            l, r = side.evaluate(values), product.evaluate(values)
            rep.check(
                abs(l - r) <= 1e-6 * (1 + abs(r)),
                "proposition1-closure-numeric",
                a=str(a),
                w=str(w),
            )
    # Determinism: a fresh cache reproduces the same normal form.
    for _ in range(40):
        n = rng.randint(1, 4)
        w = random_word(rng, n, 10)
        rep.check(
            str(reduce_trace(w, n, cache={})) == str(reduce_trace(w, n, cache={})),
            "determinism",
            w=str(w),
        )
    return rep


def suite_normalize(rng: Random) -> SuiteReport:
    rep = SuiteReport("normalization")
    for k in range(40):
        if k < 30:
            g1, g2 = random_no_shared_pair(rng)
        else:
            g1, g2 = random_parabolic_pair(rng)
        u = random_sl2(rng)
        h1, h2 = conjugate(u, g1), conjugate(u, g2)
        try:
            cp = normalize_pair(g1, g2)
            a = conjugator_between(g1, g2, h1, h2)
        except TraceEngineError as exc:
            rep.check(False, "normalize-error", g1=_jsonable(g1), g2=_jsonable(g2), error=str(exc))
            continue
        scale = 1 + max(abs(v) for m in (h1, h2) for v in m.entries())
        rep.check(
            max_entry_diff(conjugate(cp.conjugator, g1), cp.h1) <= 1e-7 * scale
            and max_entry_diff(conjugate(cp.conjugator, g2), cp.h2) <= 1e-7 * scale,
            "frame-invariant",
            g1=_jsonable(g1),
            g2=_jsonable(g2),
        )
        rep.check(
            abs(cp.conjugator.det() - 1) <= 1e-9 * (1 + abs(cp.conjugator.det())),
            "frame-determinant",
            g1=_jsonable(g1),
        )
        words = [random_nonempty_word(rng, 2, 8) for _ in range(8)]
        worst = 0.0
        for w in words:
            wg = evaluate_word(w, [g1, g2])
            wh = evaluate_word(w, [h1, h2])
            wscale = 1 + max(abs(v) for v in wh.entries())
            worst = max(worst, max_entry_diff(conjugate(a, wg), wh) / wscale)
        rep.check(worst <= 1e-6, "conjugator-on-words", g1=_jsonable(g1), worst=worst)
    # Entry matching round trip inside a frame.
    for _ in range(40):
        g1, g2 = random_no_shared_pair(rng)
        try:
            frame = normalize_pair(g1, g2)
            if frame.branch != "diagonal":
                continue
            g = random_sl2(rng)
            rec = match_third_element(
                frame,
                trace(g),
                trace(mul(frame.h1, g)),
                trace(mul(frame.h2, g)),
                trace(mul(mul(frame.h1, frame.h2), g)),
            )
        except TraceEngineError:
            continue
        rep.check(
            max_entry_diff(rec, g) <= 1e-6 * (1 + max(abs(v) for v in g.entries())),
            "entry-matching-roundtrip",
            g=_jsonable(g),
        )
    return rep


def suite_reconstruct(rng: Random) -> SuiteReport:
    rep = SuiteReport("reconstruction")
    for n in (2, 3, 4, 5):
        for _ in range(12):
            gens = [random_sl2(rng) for _ in range(n)]
            try:
                coords = extract_coordinates(gens)
                rec = reconstruct_group(coords)
            except TraceEngineError as exc:
                rep.check(False, "reconstruct-error", n=n, error=str(exc))
                continue
            worst = 0.0
            for subset in basis_for(n):
                w = FreeWord(tuple((i, 1) for i in subset))
                t0 = trace(evaluate_word(w, gens))
                t1 = trace(evaluate_word(w, rec.generators))
                worst = max(worst, abs(t0 - t1) / (1 + abs(t0)))
            rep.check(
                worst <= 1e-6,
                "roundtrip-basis-traces",
                n=n,
                worst=worst,
                gens=[_jsonable(g) for g in gens],
            )
            rep.check(
                len(coords.values) == (4 * n - 5),
                "coordinate-count",
                n=n,
            )
    # Coordinates are conjugation invariants: same canonical output.
    for _ in range(12):
        gens = [random_sl2(rng) for _ in range(3)]
        u = random_sl2(rng)
        try:
            r1 = reconstruct_group(extract_coordinates(gens))
            r2 = reconstruct_group(
                extract_coordinates([conjugate(u, g) for g in gens])
            )
        except TraceEngineError as exc:
            rep.check(False, "reconstruct-error", error=str(exc))
            continue
        worst = max(
            max_entry_diff(a, b) for a, b in zip(r1.generators, r2.generators)
        )
        rep.check(worst <= 1e-5, "conjugation-invariant-output", worst=worst)
    return rep


def suite_homcheck(rng: Random) -> SuiteReport:
    rep = SuiteReport("hom-classification")
    # Conjugated tuples classify as conjugations with sound certificates.
    for _ in range(15):
        n = rng.randint(2, 4)
        gens = [random_sl2(rng) for _ in range(n)]
        u = random_sl2(rng)
        cand = HomCandidate(
            domain_gens=gens, image_gens=[conjugate(u, g) for g in gens]
        )
        verdict = classify(cand)
        sound = verdict.kind is VerdictKind.CONJUGATION
        if sound:
            a = verdict.certificate
            for _ in range(10):
                w = random_nonempty_word(rng, n, 8)
                wd = evaluate_word(w, cand.domain_gens)
                wi = evaluate_word(w, cand.image_gens)
                scale = 1 + max(abs(v) for v in wi.entries())
                if max_entry_diff(conjugate(a, wd), wi) > 1e-6 * scale:
                    sound = False
                    break
        rep.check(sound, "conjugation-completeness", n=n, u=_jsonable(u))
    # Trace preservation on the basis transfers to random words.
    for _ in range(6):
        n = rng.randint(2, 3)
        gens = [random_sl2(rng) for _ in range(n)]
        u = random_sl2(rng)
        cand = HomCandidate(
            domain_gens=gens, image_gens=[conjugate(u, g) for g in gens]
        )
        report = check_trace_preserving(cand, WordSet.THEOREM2_BASIS)
        rep.check(report.preserving, "basis-check-passes", n=n)
        worst = 0.0
        for _ in range(200):
            w = random_nonempty_word(rng, n, 10)
            dt = trace(evaluate_word(w, cand.domain_gens))
            it = trace(evaluate_word(w, cand.image_gens))
            worst = max(worst, abs(dt - it) / (1 + abs(dt)))
        rep.check(worst <= 1e-6, "empirical-theorem2", n=n, worst=worst)
    # Reduced and full word-set verdicts agree when the reduced set applies.
    for _ in range(10):
        n = rng.randint(2, 4)
        gens = [random_sl2(rng) for _ in range(n)]
        u = random_sl2(rng)
        cand = HomCandidate(
            domain_gens=gens, image_gens=[conjugate(u, g) for g in gens]
        )
        try:
            thm3 = check_trace_preserving(cand, WordSet.THEOREM3_SET)
        except TraceEngineError:
            continue
        thm2 = check_trace_preserving(cand, WordSet.THEOREM2_BASIS)
        rep.check(
            thm3.preserving == thm2.preserving,
            "wordset-agreement",
            n=n,
        )
    # The diagonal-image family is trace preserving but degenerate.
    rho, sigma = 2.0, 3.0
    cand = HomCandidate(
        domain_gens=[Mat2C(rho, 0, 0, 1 / rho), Mat2C(sigma, 1, 0, 1 / sigma)],
        image_gens=[Mat2C(rho, 0, 0, 1 / rho), Mat2C(sigma, 0, 0, 1 / sigma)],
    )
    verdict = classify(cand)
    rep.check(
        verdict.kind is VerdictKind.TRACE_PRESERVING_DEGENERATE,
        "upper-triangular-degenerate",
    )
    return rep


def suite_relator(rng: Random) -> SuiteReport:
    rep = SuiteReport("relator-solving")
    # Exact derivative vs centered finite difference.
    h = 1e-6
    for _ in range(60):
        n = rng.randint(1, 3)
        w = random_word(rng, n, 8)
        poly = reduce_trace(w, n)
        variables = sorted(poly.variables())
        if not variables:
            continue
        v = variables[rng.randrange(len(variables))]
        point = {
            var: complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            for var in poly.variables()
        }
        exact = differentiate(poly, v).evaluate(point)
        up = dict(point)
        down = dict(point)
        up[v] += h
        down[v] -= h
        numeric = (poly.evaluate(up) - poly.evaluate(down)) / (2 * h)
        rep.check(
            abs(exact - numeric) <= 1e-5 * (1 + abs(exact)),
            "derivative-vs-finite-difference",
            w=str(w),
            var=list(v),
        )
    # Commutator relator roots and stationarity.
    comm = FreeWord.parse("A1 A2 A1^-1 A2^-1")
    fixed = {(1,): 3 + 0j, (2,): 3 + 0j}
    eq = RelatorEquation.build(comm, RelatorSign.PLUS2, (1, 2), fixed)
    try:
        root1 = solve_for_variable(eq, 1)
        root2 = solve_for_variable(eq, 10)
        rep.check(abs(root1.value - 2) <= 1e-9, "commutator-root-low")
        rep.check(abs(root2.value - 7) <= 1e-9, "commutator-root-high")
        again = solve_for_variable(eq, root1.value)
        rep.check(again.iterations <= 2, "stationary-at-solution")
    except TraceEngineError as exc:
        rep.check(False, "commutator-roots", error=str(exc))
    # Constructed double root must be reported as a non-chart point.
    eq0 = RelatorEquation.build(
        comm, RelatorSign.MINUS2, (1, 2), {(1,): 0j, (2,): 0j}
    )
    try:
        solve_for_variable(eq0, 1)
        rep.check(False, "double-root-proviso")
    except ZeroDerivativeError:
        rep.check(True, "double-root-proviso")
    return rep


ALL_SUITES = (
    suite_sl2,
    suite_words,
    suite_tracepoly,
    suite_normalize,
    suite_reconstruct,
    suite_homcheck,
    suite_relator,
)


def run_selftest(seed: int = 0) -> dict:
    """Run every suite on a generator seeded once; returns the JSON report."""
    rng = Random(seed)
    suites = [fn(rng) for fn in ALL_SUITES]
    return {
        "seed": seed,
        "ok": all(s.ok for s in suites),
        "suites": [
            {"name": s.name, "checks": s.checks, "failures": s.failures}
            for s in suites
        ],
    }
