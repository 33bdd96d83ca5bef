"""Free-group words over indexed generators A1, A2, ...

A word is an ordered list of syllables (generator_index, exponent) with
positive 1-based indices and nonzero exponents, kept freely reduced
(adjacent syllables never share a generator).  Trace computations only
depend on the conjugacy class, so the cyclic canonical form (cyclically
reduced, minimal rotation) doubles as a memoization key.

Word grammar::

    word    := term { sep term }
    term    := "A" int [ "^" signed-int ]
    sep     := whitespace | "*"

Exponent 0 and generator index 0 are syntax errors.

>>> FreeWord.parse("A1 A2^-1")
FreeWord('A1 A2^-1')
>>> FreeWord.parse("A2^3 A2^-1")
FreeWord('A2^2')
>>> FreeWord.parse("A1 A1^-1").is_empty()
True
"""

from __future__ import annotations

import re

from .errors import GeneratorIndexError, WordSyntaxError

Syllable = tuple[int, int]


def _free_reduce(syllables) -> tuple[Syllable, ...]:
    """Merge adjacent same-generator syllables, dropping zero exponents."""
    out: list[Syllable] = []
    for gen, exp in syllables:
        gen = int(gen)
        exp = int(exp)
        if gen < 1:
            raise ValueError(f"generator index must be >= 1, got {gen}")
        if exp == 0:
            raise ValueError("syllable exponent must be nonzero")
        if out and out[-1][0] == gen:
            merged = out[-1][1] + exp
            out.pop()
            if merged != 0:
                out.append((gen, merged))
        else:
            out.append((gen, exp))
    return tuple(out)


_TERM_RE = re.compile(r"A(\d+)(?:\^(-?\d+))?")


class FreeWord:
    """A freely reduced word in abstract generators."""

    __slots__ = ("syllables",)

    def __init__(self, syllables: tuple[Syllable, ...] = ()):
        object.__setattr__(self, "syllables", _free_reduce(syllables))

    def __setattr__(self, name, value):
        raise AttributeError("FreeWord is immutable")

    @classmethod
    def parse(cls, text: str) -> "FreeWord":
        """Parse word text, reporting the 0-based position of any error."""
        syllables: list[Syllable] = []
        pos = 0
        n = len(text)
        seen_term = False
        while pos < n:
            ch = text[pos]
            if ch.isspace() or ch == "*":
                pos += 1
                continue
            m = _TERM_RE.match(text, pos)
            if not m:
                raise WordSyntaxError(f"expected a term, found {ch!r}", pos)
            gen = int(m.group(1))
            if gen == 0:
                raise GeneratorIndexError("generator index 0 is invalid", pos)
            if m.group(2) is None:
                exp = 1
            else:
                exp = int(m.group(2))
                if exp == 0:
                    raise WordSyntaxError("exponent 0 is invalid", m.start(2))
            syllables.append((gen, exp))
            seen_term = True
            pos = m.end()
        if not seen_term:
            raise WordSyntaxError("expected at least one term", 0)
        return cls(tuple(syllables))

    def __str__(self):
        parts = []
        for gen, exp in self.syllables:
            parts.append(f"A{gen}" if exp == 1 else f"A{gen}^{exp}")
        return " ".join(parts)

    def __repr__(self):
        return f"FreeWord({str(self)!r})"

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.syllables == other.syllables

    def __hash__(self):
        return hash(self.syllables)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.syllables + other.syllables)

    def is_empty(self) -> bool:
        return not self.syllables

    def length(self) -> int:
        """The induction measure: sum of |exponent| over syllables."""
        return sum(abs(exp) for _, exp in self.syllables)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((gen, -exp) for gen, exp in reversed(self.syllables)))

    def occurrence_count(self, gen: int) -> int:
        """Total number of occurrences (with multiplicity) of one generator."""
        return sum(abs(exp) for g, exp in self.syllables if g == gen)

    def generators(self) -> set[int]:
        return {g for g, _ in self.syllables}

    def max_generator(self) -> int:
        return max((g for g, _ in self.syllables), default=0)

    def cyclic_canonical(self) -> "CyclicWord":
        return CyclicWord(self)


def _syllable_key(syl: Syllable) -> tuple[int, int, int]:
    # Order: generator index, then positive exponents before negative,
    # then smaller |exponent| first.  Injective on syllables.
    gen, exp = syl
    return (gen, 0 if exp > 0 else 1, abs(exp))


def _cyclically_reduce(syllables: tuple[Syllable, ...]) -> tuple[Syllable, ...]:
    syls = list(syllables)
    while len(syls) >= 2 and syls[0][0] == syls[-1][0]:
        gen = syls[0][0]
        merged = syls[0][1] + syls[-1][1]
        middle = syls[1:-1]
        syls = middle + [(gen, merged)] if merged != 0 else middle
    return tuple(syls)


def _minimal_rotation(syllables: tuple[Syllable, ...]) -> tuple[Syllable, ...]:
    if len(syllables) <= 1:
        return syllables
    rotations = (
        syllables[i:] + syllables[:i] for i in range(len(syllables))
    )
    return min(rotations, key=lambda rot: tuple(_syllable_key(s) for s in rot))


class CyclicWord:
    """The canonical representative of a conjugacy class of words.

    The representative is the cyclically reduced form of the input rotated
    to its minimum under a fixed total order on syllables, so conjugate
    words (and all rotations) canonicalize identically:

    >>> u, w = FreeWord.parse("A2 A1^-1"), FreeWord.parse("A1 A2")
    >>> CyclicWord(u * w * u.inverse()) == CyclicWord(w)
    True
    """

    __slots__ = ("representative",)

    def __init__(self, word: FreeWord):
        reduced = _cyclically_reduce(word.syllables)
        object.__setattr__(
            self, "representative", FreeWord(_minimal_rotation(reduced))
        )

    def __setattr__(self, name, value):
        raise AttributeError("CyclicWord is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, CyclicWord)
            and self.representative == other.representative
        )

    def __hash__(self):
        return hash((CyclicWord, self.representative.syllables))

    def __repr__(self):
        return f"CyclicWord({str(self.representative)!r})"

    def sort_key(self) -> tuple:
        """Total order on cyclic words (used to pick class representatives)."""
        syls = self.representative.syllables
        return (len(syls), tuple(_syllable_key(s) for s in syls))
