"""Compositions, twisted compositions and the ASCII grammar that names them.

Grammar::

    list  := '' | item (',' item)*
    item  := INT twist? ('^' INT)?
    twist := '~' | '@' ('1' | '-1' | 'i' | '-i')

``~`` is a synonym for ``@-1`` and ``^r`` repeats the whole item ``r`` times,
so ``"2~,1^3"`` is ``(2,1,1,1)`` with twists ``(-1,1,1,1)``.  A list may be
wrapped in parentheses; the empty composition prints as ``()``.

The first part ``k_1`` carries the largest summation index, i.e.
``zeta(k_1,...,k_r) = sum_{n_1 > ... > n_r} n_1^{-k_1} ... n_r^{-k_r}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Composition",
    "TwistedComposition",
    "CompositionSyntaxError",
    "ROOTS",
    "parse",
    "format_composition",
    "hoffman_dual",
    "weight",
    "depth",
    "is_admissible",
    "slice",
    "compositions_of",
    "all_compositions",
    "root_exponent",
    "root_from_exponent",
]

# twists are kept as exact Python numbers: ints for +-1, complex for +-i
ROOTS = (1, 1j, -1, -1j)
_TWIST_TOKENS = {"1": 1, "-1": -1, "i": 1j, "-i": -1j}
_TWIST_NAMES = {1: "", -1: "~", 1j: "@i", -1j: "@-i"}


def root_exponent(z) -> int:
    """Return e with z == i**e, e in 0..3."""
    for e, r in enumerate(ROOTS):
        if z == r:
            return e
    raise ValueError(f"{z!r} is not a 4th root of unity")


def root_from_exponent(e: int):
    return ROOTS[e % 4]


def _canon_root(z):
    return root_from_exponent(root_exponent(z))


class CompositionSyntaxError(ValueError):
    """Raised by :func:`parse`; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, text: str, offset: int):
        self.text = text
        self.offset = offset
        super().__init__(f"{message} at byte {offset} in {text!r}")


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        for p in parts:
            if p < 1:
                raise ValueError(f"composition parts must be >= 1, got {p}")
        object.__setattr__(self, "parts", parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    def twisted(self, twists: Sequence | None = None) -> "TwistedComposition":
        if twists is None:
            twists = (1,) * len(self.parts)
        return TwistedComposition(self.parts, tuple(twists))

    def __str__(self) -> str:
        return format_composition(self)


@dataclass(frozen=True)
class TwistedComposition:
    parts: tuple[int, ...] = ()
    twists: tuple = ()

    def __post_init__(self):
        parts = Composition(self.parts).parts
        twists = tuple(_canon_root(z) for z in self.twists)
        if len(parts) != len(twists):
            raise ValueError("parts and twists must have equal length")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "twists", twists)

    @property
    def composition(self) -> Composition:
        return Composition(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    @property
    def level(self) -> int:
        es = [root_exponent(z) for z in self.twists]
        if any(e % 2 for e in es):
            return 4
        if any(es):
            return 2
        return 1

    @property
    def is_untwisted(self) -> bool:
        return all(z == 1 for z in self.twists)

    def conjugate(self) -> "TwistedComposition":
        return TwistedComposition(self.parts, tuple(complex(z).conjugate() for z in self.twists))

    def __iter__(self):
        return iter(zip(self.parts, self.twists))

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return format_composition(self)


def _as_twisted(c) -> TwistedComposition:
    if isinstance(c, TwistedComposition):
        return c
    if isinstance(c, Composition):
        return c.twisted()
    if isinstance(c, str):
        return parse(c)
    return Composition(tuple(c)).twisted()


def _as_plain(c) -> Composition:
    if isinstance(c, Composition):
        return c
    if isinstance(c, TwistedComposition):
        if not c.is_untwisted:
            raise ValueError("operation is defined only for untwisted compositions")
        return c.composition
    if isinstance(c, str):
        return _as_plain(parse(c))
    return Composition(tuple(c))


def parse(text: str) -> TwistedComposition:
    """Parse the composition grammar into a :class:`TwistedComposition`.

    >>> parse("2~,1")
    TwistedComposition(parts=(2, 1), twists=(-1, 1))
    >>> parse("2,1^3").parts
    (2, 1, 1, 1)
    """
    # latin-1 keeps one character per byte, so positions are byte offsets
    s = text.encode("utf-8").decode("latin-1")
    pos = 0
    n = len(s)

    def skip_ws():
        nonlocal pos
        while pos < n and s[pos] in " \t":
            pos += 1

    def fail(msg):
        raise CompositionSyntaxError(msg, text, pos)

    def read_int(signed=False):
        nonlocal pos
        start = pos
        if signed and pos < n and s[pos] in "+-":
            pos += 1
        digits = pos
        while pos < n and s[pos] in "0123456789":
            pos += 1
        if pos == digits:
            pos = start
            fail("expected integer")
        return int(s[start:pos]), start

    skip_ws()
    closing = False
    if pos < n and s[pos] == "(":
        pos += 1
        closing = True
        skip_ws()

    parts: list[int] = []
    twists: list = []
    at_end = (lambda: pos >= n) if not closing else (lambda: pos < n and s[pos] == ")")
    if not at_end():
        while True:
            skip_ws()
            value, start = read_int(signed=True)
            if value < 1:
                pos = start
                fail(f"part must be a positive integer, got {value}")
            twist = 1
            if pos < n and s[pos] == "~":
                pos += 1
                twist = -1
            elif pos < n and s[pos] == "@":
                pos += 1
                for tok in ("-1", "-i", "1", "i"):
                    if s.startswith(tok, pos):
                        twist = _TWIST_TOKENS[tok]
                        pos += len(tok)
                        break
                else:
                    fail("expected one of 1, -1, i, -i after '@'")
            reps = 1
            if pos < n and s[pos] == "^":
                pos += 1
                reps, start = read_int(signed=True)
                if reps < 1:
                    pos = start
                    fail(f"repetition count must be positive, got {reps}")
            parts.extend([value] * reps)
            twists.extend([twist] * reps)
            skip_ws()
            if pos < n and s[pos] == ",":
                pos += 1
                continue
            break
    if closing:
        if pos < n and s[pos] == ")":
            pos += 1
        else:
            fail("expected ')'")
    skip_ws()
    if pos != n:
        fail(f"unexpected character {s[pos]!r}")
    return TwistedComposition(tuple(parts), tuple(twists))


def format_composition(c) -> str:
    """Inverse of :func:`parse`.  Repetitions are written out in full."""
    tc = _as_twisted(c)
    if tc.depth == 0:
        return "()"
    return ",".join(f"{k}{_TWIST_NAMES[z]}" for k, z in tc)


def weight(c) -> int:
    return _as_twisted(c).weight


def depth(c) -> int:
    return _as_twisted(c).depth


def is_admissible(c, context: str = "MZV") -> bool:
    """Convergence test for the leading index.

    ``MZV`` and ``word``: ``k_1 >= 2`` or the leading twist is not 1.
    ``t``: ``k_1 >= 2`` or ``k_1 = 1`` with twist ``-1``.
    The empty composition is admissible in every context.
    """
    tc = _as_twisted(c)
    if tc.depth == 0:
        return True
    k1, z1 = tc.parts[0], tc.twists[0]
    if context in ("MZV", "word"):
        return k1 >= 2 or z1 != 1
    if context == "t":
        return k1 >= 2 or z1 == -1
    raise ValueError(f"unknown admissibility context {context!r}")


def hoffman_dual(c) -> Composition:
    """Swap commas and plus signs in ``1 (,|+) 1 (,|+) ... 1``.

    >>> hoffman_dual((1, 1, 2, 1)).parts
    (3, 2)
    """
    comp = _as_plain(c)
    if comp.depth == 0:
        raise ValueError("the Hoffman dual of the empty composition is undefined")
    # separators between consecutive ones: True marks a comma
    seps = []
    for k in comp.parts:
        seps.extend([False] * (k - 1))
        seps.append(True)
    seps.pop()
    out = [1]
    for comma in seps:
        if comma:
            out[-1] += 1
        else:
            out.append(1)
    return Composition(tuple(out))


def slice(c, i: int, j: int, direction: str = "fwd") -> Composition:  # noqa: A001
    """``(k_i,...,k_j)`` for ``fwd`` or ``(k_j,...,k_i)`` for ``rev``; empty if i > j."""
    comp = _as_plain(c)
    if i < 1:
        raise ValueError("slice start must be >= 1")
    if j > comp.depth:
        raise ValueError(f"slice end {j} exceeds depth {comp.depth}")
    if direction not in ("fwd", "rev"):
        raise ValueError("direction must be 'fwd' or 'rev'")
    if i > j:
        return Composition(())
    seg = comp.parts[i - 1 : j]
    return Composition(seg if direction == "fwd" else seg[::-1])


def compositions_of(w: int) -> Iterator[Composition]:
    """All compositions of weight ``w`` (one for w = 0, the empty one)."""
    if w == 0:
        yield Composition(())
        return
    for bits in product((False, True), repeat=w - 1):
        parts = [1]
        for cut in bits:
            if cut:
                parts.append(1)
            else:
                parts[-1] += 1
        yield Composition(tuple(parts))


def all_compositions(max_weight: int, min_weight: int = 1) -> Iterator[Composition]:
    for w in range(min_weight, max_weight + 1):
        yield from compositions_of(w)


def twistings(c, roots: Iterable = ROOTS) -> Iterator[TwistedComposition]:
    comp = _as_plain(c)
    roots = tuple(roots)
    for tw in product(roots, repeat=comp.depth):
        yield TwistedComposition(comp.parts, tw)
