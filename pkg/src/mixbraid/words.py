"""
Words in the mixed braid groups B_{g,n}.

An element of B_{g,n} is written in one of two generating sets that share the
classical generators sigma_1 .. sigma_{n-1}:

- the handle generators a_1 .. a_g, where a_i loops the first moving strand
  around the i-th fixed strand;
- the loop generators b_1 .. b_g with b_i = a_i a_{i+1} ... a_g.

Words are stored as tuples of syllables ``(kind, index, exponent)`` and are kept
freely reduced: adjacent syllables on the same generator are merged and zero
exponents dropped. Nothing is rewritten modulo the braid relations here; see
:mod:`mixbraid.garside` for canonical forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

SIGMA = "s"
HANDLE = "a"
LOOP = "b"
KINDS = (SIGMA, HANDLE, LOOP)

Letter = tuple[str, int, int]


class WordError(ValueError):
    """Raised for malformed words or incompatible operands."""


@dataclass(frozen=True)
class Generator:
    kind: str
    index: int
    exponent: int = 1

    def __str__(self) -> str:
        if self.exponent == 1:
            return f"{self.kind}{self.index}"
        return f"{self.kind}{self.index}^{self.exponent}"


@dataclass(frozen=True)
class Signature:
    g: int
    n: int

    def __post_init__(self) -> None:
        if self.g < 0 or self.n < 1:
            raise WordError(f"invalid signature g={self.g} n={self.n}")


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for kind, index, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == kind and out[-1][1] == index:
            merged = out[-1][2] + exp
            out.pop()
            if merged:
                out.append((kind, index, merged))
        else:
            out.append((kind, index, exp))
    return tuple(out)


@dataclass(frozen=True)
class BraidWord:
    """A freely reduced word in B_{g,n}.

    ``letters`` holds syllables ``(kind, index, exponent)`` with kind one of
    ``"s"`` (sigma), ``"a"`` or ``"b"``. Handle and loop letters never share a
    word.

    ``raw=True`` keeps the letters exactly as given (only zero exponents are
    dropped). Raw words appear inside move certificates, where a relator step
    may spell an element with cancelling pairs so that a later move can split
    it at the right place.
    """

    g: int
    n: int
    letters: tuple[Letter, ...] = ()
    raw: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        Signature(self.g, self.n)
        if self.raw:
            letters = tuple(tuple(l) for l in self.letters if l[2] != 0)
        else:
            letters = free_reduce(tuple(l) for l in self.letters)
        kinds = set()
        for kind, index, _ in letters:
            if kind == SIGMA:
                if not 1 <= index <= self.n - 1:
                    raise WordError(f"s{index} out of range for n={self.n}")
            elif kind in (HANDLE, LOOP):
                if not 1 <= index <= self.g:
                    raise WordError(f"{kind}{index} out of range for g={self.g}")
                kinds.add(kind)
            else:
                raise WordError(f"unknown generator kind {kind!r}")
        if len(kinds) > 1:
            raise WordError("a- and b-generators mixed in one word")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def identity(cls, g: int, n: int) -> BraidWord:
        return cls(g, n, ())

    @property
    def signature(self) -> Signature:
        return Signature(self.g, self.n)

    @property
    def family(self) -> str | None:
        """``"a"``, ``"b"`` or None when the word has no handle/loop letters."""
        for kind, _, _ in self.letters:
            if kind != SIGMA:
                return kind
        return None

    def __len__(self) -> int:
        return sum(abs(e) for _, _, e in self.letters)

    def __iter__(self):
        return iter(self.letters)

    def units(self) -> tuple[Letter, ...]:
        """The word spelled out with unit exponents."""
        return tuple((k, i, 1 if e > 0 else -1) for k, i, e in self.letters for _ in range(abs(e)))

    def generators(self) -> list[Generator]:
        return [Generator(*l) for l in self.letters]

    def with_n(self, n: int) -> BraidWord:
        return BraidWord(self.g, n, self.letters)

    def reduced(self) -> BraidWord:
        return self if not self.raw else BraidWord(self.g, self.n, self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def __mul__(self, other: BraidWord) -> BraidWord:
        return multiply(self, other)


def gen(kind: str, index: int, exponent: int = 1) -> Letter:
    return (kind, index, exponent)


def word(g: int, n: int, *letters: Letter) -> BraidWord:
    return BraidWord(g, n, tuple(letters))


# -- text format ------------------------------------------------------------

_HEADER = re.compile(r"^\s*g\s*=\s*(\d+)\s+n\s*=\s*(\d+)\s*;(.*)$", re.S)
_TOKEN = re.compile(r"^([abs])(\d+)(?:\^([+-]?\d+))?$")


def parse_word(text: str, raw: bool = False) -> BraidWord:
    """Parse ``"g=<int> n=<int>; tok tok ..."`` where tokens are a<i>, b<i>, s<i>
    with an optional ``^<signed int>`` exponent."""
    m = _HEADER.match(text)
    if not m:
        raise WordError(f"expected header 'g=<int> n=<int>;' in {text!r}")
    g, n, body = int(m.group(1)), int(m.group(2)), m.group(3)
    letters = []
    for tok in body.split():
        t = _TOKEN.match(tok)
        if not t:
            raise WordError(f"bad token {tok!r}")
        exp = int(t.group(3)) if t.group(3) is not None else 1
        letters.append((t.group(1), int(t.group(2)), exp))
    return BraidWord(g, n, tuple(letters), raw=raw)


def format_letters(letters: Sequence[Letter]) -> str:
    return " ".join(str(Generator(*l)) for l in letters)


def format_word(u: BraidWord) -> str:
    body = format_letters(u.letters)
    return f"g={u.g} n={u.n};" + (f" {body}" if body else "")


# -- group operations ---------------------------------------------------------


def _check_compatible(u: BraidWord, v: BraidWord) -> None:
    if u.signature != v.signature:
        raise WordError(f"signature mismatch {u.signature} vs {v.signature}")
    fu, fv = u.family, v.family
    if fu and fv and fu != fv:
        raise WordError("cannot multiply an a-word by a b-word; convert first")


def multiply(u: BraidWord, v: BraidWord) -> BraidWord:
    _check_compatible(u, v)
    return BraidWord(u.g, u.n, u.letters + v.letters)


def invert_letters(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple((k, i, -e) for k, i, e in reversed(letters))


def invert(u: BraidWord) -> BraidWord:
    return BraidWord(u.g, u.n, invert_letters(u.letters))


def power(u: BraidWord, k: int) -> BraidWord:
    base = u.letters if k >= 0 else invert_letters(u.letters)
    return BraidWord(u.g, u.n, base * abs(k))


def a_to_b(u: BraidWord) -> BraidWord:
    """Rewrite handle generators as loops: a_i = b_i b_{i+1}^-1, a_g = b_g."""
    if u.family == LOOP:
        raise WordError("word is already in b-generators")
    out: list[Letter] = []
    for kind, i, e in u.letters:
        if kind != HANDLE:
            out.append((kind, i, e))
            continue
        block: tuple[Letter, ...] = ((LOOP, i, 1),) if i == u.g else ((LOOP, i, 1), (LOOP, i + 1, -1))
        if e < 0:
            block = invert_letters(block)
        out.extend(block * abs(e))
    return BraidWord(u.g, u.n, tuple(out))


def b_to_a(u: BraidWord) -> BraidWord:
    """Expand loops: b_i = a_i a_{i+1} ... a_g."""
    if u.family == HANDLE:
        raise WordError("word is already in a-generators")
    out: list[Letter] = []
    for kind, i, e in u.letters:
        if kind != LOOP:
            out.append((kind, i, e))
            continue
        block = tuple((HANDLE, j, 1) for j in range(i, u.g + 1))
        if e < 0:
            block = invert_letters(block)
        out.extend(block * abs(e))
    return BraidWord(u.g, u.n, tuple(out))


def to_a(u: BraidWord) -> BraidWord:
    return b_to_a(u) if u.family == LOOP else u


# -- embedding into the classical braid group ----------------------------------

# a_i is sent to the positive band sigma_g..sigma_{i+1} sigma_i^2 sigma_{i+1}^-1..sigma_g^-1.
# Either sign of the square satisfies all relations; +2 is fixed here.
HANDLE_TWIST = 2


def classical_reduce(w: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def handle_image(g: int, i: int) -> tuple[int, ...]:
    """Classical word on g+n strands for a_i (signed ints: +k = sigma_k)."""
    down = list(range(g, i, -1))
    core = [i] * HANDLE_TWIST if HANDLE_TWIST > 0 else [-i] * -HANDLE_TWIST
    return tuple(down + core + [-k for k in reversed(down)])


def embed(u: BraidWord) -> tuple[int, ...]:
    """Image of u in B_{g+n}; sigma_k goes to sigma_{g+k}."""
    u = to_a(u)
    out: list[int] = []
    for kind, i, e in u.letters:
        if kind == SIGMA:
            block: tuple[int, ...] = (u.g + i,)
        else:
            block = handle_image(u.g, i)
        if e < 0:
            block = tuple(-x for x in reversed(block))
        out.extend(block * abs(e))
    return classical_reduce(out)


def format_classical(w: Sequence[int], strands: int | None = None) -> str:
    body = " ".join(f"s{abs(x)}" + ("^-1" if x < 0 else "") for x in w)
    if strands is None:
        return body
    return f"m={strands};" + (f" {body}" if body else "")


# -- statistics -----------------------------------------------------------------


def underlying_permutation(u: BraidWord) -> tuple[int, ...]:
    """perm[p-1] = bottom position of the moving strand starting at top position p."""
    pos = list(range(1, u.n + 1))  # pos[strand] = current position
    at = list(range(u.n))  # at[position-1] = strand
    for kind, i, e in u.letters:
        if kind != SIGMA or e % 2 == 0:
            continue
        s, t = at[i - 1], at[i]
        at[i - 1], at[i] = t, s
        pos[s], pos[t] = i + 1, i
    return tuple(pos)


def permutation_cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = set()
    cycles = []
    for start in range(1, len(perm) + 1):
        if start in seen:
            continue
        cyc = []
        p = start
        while p not in seen:
            seen.add(p)
            cyc.append(p)
            p = perm[p - 1]
        cycles.append(tuple(cyc))
    return cycles


def exponent_sum(u: BraidWord) -> int:
    return sum(e for kind, _, e in u.letters if kind == SIGMA)


def a_exponent_vector(u: BraidWord) -> tuple[int, ...]:
    if u.family == LOOP:
        raise WordError("a_exponent_vector expects an a-word")
    vec = [0] * u.g
    for kind, i, e in u.letters:
        if kind == HANDLE:
            vec[i - 1] += e
    return tuple(vec)
