"""Exact trace polynomials and the trace-reduction rewrite system.

The trace of any word in SL(2,C) generators is a polynomial with integer
coefficients in the "basis traces": the traces of ascending-ordered products
of distinct generators (t1, t2, ..., t12, t13, ..., t123, ...).  This module
makes that constructive: `reduce_trace` rewrites any word's trace into such a
polynomial using only the identity

    tr(XY) + tr(X^-1 Y) = tr(X) tr(Y)

together with conjugation invariance of the trace.  The rewrite strategy is
deterministic, so equal conjugacy classes produce term-identical polynomials
and results are safe to memoize by cyclic word.

>>> from .words import FreeWord
>>> str(reduce_trace(FreeWord.parse("A1 A2 A1^-1 A2^-1"), 2))
't1^2 + t2^2 + t12^2 - t1*t2*t12 - 2'
>>> str(reduce_trace(FreeWord.parse("A1^2"), 1))
't1^2 - 2'
"""

from __future__ import annotations

import sys
from itertools import combinations
from typing import Iterable, Mapping

from .errors import IndexOutOfRangeError, MissingVariableError
from .words import CyclicWord, FreeWord, Syllable

# A basis variable is the strictly ascending tuple of generator indices of
# the word it abbreviates; t13 means tr(A1*A3) regardless of how many
# generators are in play.
BasisVar = tuple[int, ...]

# A monomial maps basis variables to positive exponents, stored as a tuple
# of (variable, exponent) pairs sorted by subset order (size, then lex).
Monomial = tuple[tuple[BasisVar, int], ...]

_EMPTY_MONOMIAL: Monomial = ()


def _subset_key(v: BasisVar) -> tuple[int, BasisVar]:
    return (len(v), v)


def var_name(subset: BasisVar) -> str:
    """Printable name: t1, t12, t123; underscores once indices exceed 9."""
    if subset and subset[-1] > 9:
        return "t" + "_".join(str(i) for i in subset)
    return "t" + "".join(str(i) for i in subset)


def parse_var_name(name: str) -> BasisVar:
    """Inverse of var_name.

    >>> parse_var_name("t12")
    (1, 2)
    >>> parse_var_name("t1_12")
    (1, 12)
    """
    if not name.startswith("t") or len(name) < 2:
        raise ValueError(f"not a trace variable name: {name!r}")
    body = name[1:]
    parts = body.split("_") if "_" in body else list(body)
    try:
        subset = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"not a trace variable name: {name!r}") from None
    if any(i < 1 for i in subset) or list(subset) != sorted(set(subset)):
        raise ValueError(f"indices must be strictly ascending: {name!r}")
    return subset


def basis_for(n: int) -> list[BasisVar]:
    """All 2^n - 1 nonempty ascending subsets in size-then-lex order."""
    if n < 1:
        raise ValueError("need at least one generator")
    out: list[BasisVar] = []
    for k in range(1, n + 1):
        out.extend(combinations(range(1, n + 1), k))
    return out


class TracePoly:
    """Sparse polynomial in basis trace variables with int coefficients.

    Immutable by convention; `terms` maps canonical monomials to nonzero
    arbitrary-precision integer coefficients.  Supports +, -, * (with other
    polynomials or ints).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, int] | None = None):
        object.__setattr__(self, "terms", dict(terms or {}))

    def __setattr__(self, name, value):
        raise AttributeError("TracePoly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "TracePoly":
        return cls()

    @classmethod
    def constant(cls, value: int) -> "TracePoly":
        return cls({_EMPTY_MONOMIAL: int(value)} if value else {})

    @classmethod
    def variable(cls, subset: Iterable[int]) -> "TracePoly":
        subset = tuple(subset)
        if not subset or list(subset) != sorted(set(subset)) or subset[0] < 1:
            raise ValueError(f"invalid basis variable {subset!r}")
        return cls({((subset, 1),): 1})

    @classmethod
    def from_terms(cls, mapping: Mapping) -> "TracePoly":
        """Build from {monomial-like: coeff}, canonicalizing monomials."""
        terms: dict[Monomial, int] = {}
        for mono, coeff in mapping.items():
            coeff = int(coeff)
            if coeff == 0:
                continue
            pairs = dict(mono)
            if any(e < 1 for e in pairs.values()):
                raise ValueError("monomial exponents must be positive")
            key = tuple(sorted(pairs.items(), key=lambda kv: _subset_key(kv[0])))
            terms[key] = terms.get(key, 0) + coeff
            if terms[key] == 0:
                del terms[key]
        return cls(terms)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            new = terms.get(mono, 0) + coeff
            if new:
                terms[mono] = new
            else:
                terms.pop(mono, None)
        return TracePoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return TracePoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mul_monomials(m1, m2)
                new = terms.get(mono, 0) + c1 * c2
                if new:
                    terms[mono] = new
                else:
                    terms.pop(mono, None)
        return TracePoly(terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = TracePoly.constant(other)
        return isinstance(other, TracePoly) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == _EMPTY_MONOMIAL for m in self.terms)

    def variables(self) -> set[BasisVar]:
        return {v for mono in self.terms for v, _ in mono}

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, values: Mapping[BasisVar, complex]) -> complex:
        """Evaluate at complex values of the basis variables.

        Terms are summed in canonical display order so results are
        bit-reproducible across runs.
        """
        total = 0j
        for mono, coeff in self.sorted_terms():
            term = complex(coeff)
            for v, e in mono:
                if v not in values:
                    raise MissingVariableError(var_name(v))
                term *= complex(values[v]) ** e
            total += term
        return total

    # -- display ------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms sorted by total degree then lex on variables, constant last."""
        order = sorted(self.variables(), key=_subset_key)
        index = {v: i for i, v in enumerate(order)}

        def key(item):
            mono, _ = item
            vec = [0] * len(order)
            for v, e in mono:
                vec[index[v]] = e
            degree = sum(vec)
            return (degree == 0, degree, tuple(-e for e in vec))

        return sorted(self.terms.items(), key=key)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for mono, coeff in self.sorted_terms():
            factors = "*".join(
                var_name(v) if e == 1 else f"{var_name(v)}^{e}" for v, e in mono
            )
            mag = abs(coeff)
            body = factors if factors else str(mag)
            if factors and mag != 1:
                body = f"{mag}*{factors}"
            if not pieces:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"TracePoly({str(self)!r})"

    def to_json_terms(self) -> list[dict]:
        """JSON form: [{"coeff": decimal string, "monomial": {var: exp}}]."""
        return [
            {
                "coeff": str(coeff),
                "monomial": {var_name(v): e for v, e in mono},
            }
            for mono, coeff in self.sorted_terms()
        ]


def _coerce(value):
    if isinstance(value, TracePoly):
        return value
    if isinstance(value, int):
        return TracePoly.constant(value)
    return NotImplemented


def _mul_monomials(m1: Monomial, m2: Monomial) -> Monomial:
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda kv: _subset_key(kv[0])))


def evaluate_poly(p: TracePoly, values: Mapping[BasisVar, complex]) -> complex:
    return p.evaluate(values)


# ---------------------------------------------------------------------------
# The rewrite system.
#
# Rules, applied to the cyclic canonical form in priority order:
#   R0  empty word -> 2; single letter A_i^{+-1} -> t_i
#   R1  a syllable A^k with |k| >= 2: tr(A^k U) = tr(A) tr(A^{k-+1} U)
#       - tr(A^{k-+2} U)
#   R2  repeated letter, same sign, A U A V:
#       tr = tr(AU) tr(AV) - tr(U^-1 V)
#   R3  repeated letter, opposite sign, A U A^-1 V:
#       tr = tr(AU) tr(A^-1 V) - tr(A^2 U V^-1)
#   R4  squarefree with an inverted letter, U A^-1:
#       tr = tr(A) tr(U) - tr(U A)
#   R5  squarefree all-positive with an adjacent inversion W2 B A W1:
#       tr = tr(B) tr(A W1 W2) - tr(A) tr(W1 W2 B^-1)
#            + tr(AB) tr(W1 W2) - tr(W2 A B W1)
#   R6  squarefree, all-positive, ascending -> the basis variable
#
# Every rule is an instance of tr(XY) + tr(X^-1 Y) = tr(X) tr(Y) plus
# rotation invariance.  The word length l(W) strictly decreases in every
# recursive call except R3's last term (which R1 then shrinks) and the
# equal-length calls of R4/R5, which strictly decrease the number of
# inverted letters resp. adjacent inversions.  Target choices are fixed
# (lowest generator index, leftmost occurrence) so output is deterministic.

ReductionCache = dict[CyclicWord, TracePoly]

DEFAULT_CACHE: ReductionCache = {}


def reduce_trace(
    word: FreeWord, n: int, cache: ReductionCache | None = None
) -> TracePoly:
    """Express tr(W(M1..Mn)) as an exact polynomial in basis traces.

    The result depends only on the cyclic canonical form of `word` (traces
    are class functions) and not on `n`, which only validates indices; a
    shared variable like t13 denotes the same trace at every n.
    """
    if n < 1:
        raise ValueError("need at least one generator")
    if word.max_generator() > n:
        raise IndexOutOfRangeError(
            f"word uses generator {word.max_generator()} but n = {n}"
        )
    if cache is None:
        cache = DEFAULT_CACHE
    needed = 5000 + 80 * word.length()
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)
    return _reduce(_class_representative(word), cache)


def _class_representative(word: FreeWord) -> CyclicWord:
    # tr(w) = tr(w^-1) in SL(2,C), so reduce the smaller of the two cyclic
    # forms; this makes inverse invariance hold term-identically.
    return min(
        word.cyclic_canonical(),
        word.inverse().cyclic_canonical(),
        key=CyclicWord.sort_key,
    )


def _reduce(cyc: CyclicWord, cache: ReductionCache) -> TracePoly:
    hit = cache.get(cyc)
    if hit is not None:
        return hit
    result = _apply_rules(cyc.representative.syllables, cache)
    cache[cyc] = result
    return result


def _tr(syllables: tuple[Syllable, ...], cache: ReductionCache) -> TracePoly:
    return _reduce(_class_representative(FreeWord(syllables)), cache)


def _invert(syllables: tuple[Syllable, ...]) -> tuple[Syllable, ...]:
    return tuple((g, -e) for g, e in reversed(syllables))


def _with_head(gen: int, exp: int, rest: tuple[Syllable, ...]):
    return (((gen, exp),) + rest) if exp else rest


def _apply_rules(syls: tuple[Syllable, ...], cache: ReductionCache) -> TracePoly:
    # R0
    if not syls:
        return TracePoly.constant(2)
    if len(syls) == 1 and abs(syls[0][1]) == 1:
        return TracePoly.variable((syls[0][0],))

    # R1: lowest generator carrying a power syllable, leftmost occurrence.
    power_gens = sorted({g for g, e in syls if abs(e) >= 2})
    if power_gens:
        gen = power_gens[0]
        p = next(
            i for i, (g, e) in enumerate(syls) if g == gen and abs(e) >= 2
        )
        rot = syls[p:] + syls[:p]
        (_, exp), rest = rot[0], rot[1:]
        s = 1 if exp > 0 else -1
        t_gen = TracePoly.variable((gen,))
        return t_gen * _tr(_with_head(gen, exp - s, rest), cache) - _tr(
            _with_head(gen, exp - 2 * s, rest), cache
        )

    # All exponents are +-1 from here on.
    counts: dict[int, int] = {}
    for g, _ in syls:
        counts[g] = counts.get(g, 0) + 1
    repeated = sorted(g for g, k in counts.items() if k >= 2)
    if repeated:
        gen = repeated[0]
        positions = [i for i, (g, _) in enumerate(syls) if g == gen]
        p, q = positions[0], positions[1]
        rot = syls[p:] + syls[:p]
        split = q - p
        head, mate = rot[0], rot[split]
        between, after = rot[1:split], rot[split + 1 :]
        if head[1] == mate[1]:
            # R2: A U A V
            return _tr((head,) + between, cache) * _tr(
                (head,) + after, cache
            ) - _tr(_invert(between) + after, cache)
        # R3: A U A^-1 V
        doubled = (head[0], 2 * head[1])
        return _tr((head,) + between, cache) * _tr((mate,) + after, cache) - _tr(
            (doubled,) + between + _invert(after), cache
        )

    # Squarefree letter word.
    negatives = [i for i, (_, e) in enumerate(syls) if e < 0]
    if negatives:
        # R4: rotate the leftmost inverted letter to the end: U A^-1.
        p = negatives[0]
        rot = syls[p:] + syls[:p]
        gen = rot[0][0]
        tail = rot[1:]
        return TracePoly.variable((gen,)) * _tr(tail, cache) - _tr(
            tail + ((gen, 1),), cache
        )

    for j in range(len(syls) - 1):
        if syls[j][0] > syls[j + 1][0]:
            # R5: W2 B A W1 with idx(B) > idx(A).
            big, small = syls[j], syls[j + 1]
            prefix, suffix = syls[:j], syls[j + 2 :]
            t_big = TracePoly.variable((big[0],))
            t_small = TracePoly.variable((small[0],))
            return (
                t_big * _tr((small,) + suffix + prefix, cache)
                - t_small * _tr(suffix + prefix + ((big[0], -1),), cache)
                + _tr((small, big), cache) * _tr(suffix + prefix, cache)
                - _tr(prefix + (small, big) + suffix, cache)
            )

    # R6: ascending squarefree all-positive word.
    return TracePoly.variable(tuple(g for g, _ in syls))
