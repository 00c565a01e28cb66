"""
Garside left normal form in the classical braid group B_m.

A braid is written as Delta^p A_1 ... A_k with each A_j a permutation braid
(a positive braid in which any two strands cross at most once). Permutation
braids are stored as tuples ``perm`` with ``perm[j]`` the bottom position of the
strand that starts at top position ``j`` (0-based). The product A B (A on top)
is then ``B[A[j]]``.

Mixed braid words are compared through :func:`mixbraid.words.embed`; B_{g,n}
sits inside B_{g+n} as a subgroup, so equality there is equality here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .words import BraidWord, WordError, classical_reduce, embed

Perm = tuple[int, ...]


def identity_perm(m: int) -> Perm:
    return tuple(range(m))


@lru_cache(maxsize=None)
def half_twist(m: int) -> Perm:
    return tuple(range(m - 1, -1, -1))


def _swap(m: int, i: int) -> Perm:
    """Transposition of positions i-1, i (sigma_i, 1-based)."""
    p = list(range(m))
    p[i - 1], p[i] = i, i - 1
    return tuple(p)


def _compose(a: Perm, b: Perm) -> Perm:
    return tuple(b[x] for x in a)


def _inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for j, x in enumerate(a):
        out[x] = j
    return tuple(out)


def tau(a: Perm) -> Perm:
    """Conjugation by the half twist: Delta A Delta^-1."""
    m = len(a)
    return tuple(m - 1 - a[m - 1 - j] for j in range(m))


def starting_set(a: Perm) -> set[int]:
    """Generators i with sigma_i a left prefix of the permutation braid."""
    return {i for i in range(1, len(a)) if a[i - 1] > a[i]}


def finishing_set(a: Perm) -> set[int]:
    """Generators i with sigma_i a right suffix of the permutation braid."""
    inv = _inverse(a)
    return {i for i in range(1, len(a)) if inv[i - 1] > inv[i]}


def _left_weight(a: Perm, b: Perm) -> tuple[Perm, Perm]:
    """Slide prefixes of b into a until the pair is left-weighted."""
    m = len(a)
    while True:
        extra = starting_set(b) - finishing_set(a)
        if not extra:
            return a, b
        i = min(extra)
        s = _swap(m, i)
        a = _compose(a, s)
        b = _compose(s, b)


def perm_word(a: Perm) -> list[int]:
    """A positive word (1-based generators) for a permutation braid."""
    # Bubble sort the bottom positions; each swap is one crossing.
    target = _inverse(a)  # target[pos] = strand that must end at pos
    strands = list(range(len(a)))  # strands[pos] = strand currently at pos
    out = []
    rank = {s: p for p, s in enumerate(target)}
    changed = True
    while changed:
        changed = False
        for j in range(len(a) - 1):
            if rank[strands[j]] > rank[strands[j + 1]]:
                strands[j], strands[j + 1] = strands[j + 1], strands[j]
                out.append(j + 1)
                changed = True
    return out


@dataclass(frozen=True)
class NormalForm:
    """Delta^infimum * factors, factors left-weighted, no Delta or identity among them."""

    strands: int
    infimum: int
    factors: tuple[Perm, ...]

    def key(self) -> str:
        return serialize(self)

    def __str__(self) -> str:
        return serialize(self)

    @property
    def canonical_length(self) -> int:
        return len(self.factors)

    def to_word(self) -> tuple[int, ...]:
        """A classical word representing this braid."""
        delta = perm_word(half_twist(self.strands))
        out: list[int] = []
        if self.infimum >= 0:
            out.extend(delta * self.infimum)
        else:
            out.extend([-x for x in reversed(delta)] * -self.infimum)
        for f in self.factors:
            out.extend(perm_word(f))
        return classical_reduce(out)


def serialize(nf: NormalForm) -> str:
    parts = [f"inf={nf.infimum}"]
    parts.extend(",".join(str(x + 1) for x in f) for f in nf.factors)
    return f"m={nf.strands}|" + "|".join(parts)


def deserialize(text: str) -> NormalForm:
    head, *rest = text.split("|")
    if not head.startswith("m=") or not rest or not rest[0].startswith("inf="):
        raise ValueError(f"not a serialized normal form: {text!r}")
    m = int(head[2:])
    inf = int(rest[0][4:])
    factors = tuple(tuple(int(x) - 1 for x in part.split(",")) for part in rest[1:])
    return NormalForm(m, inf, factors)


class _Builder:
    """Incremental left normal form under right multiplication."""

    def __init__(self, m: int) -> None:
        self.m = m
        self.inf = 0
        self.factors: list[Perm] = []
        self.ident = identity_perm(m)
        self.delta = half_twist(m)

    def push_simple(self, x: Perm) -> None:
        if x == self.ident:
            return
        if x == self.delta:
            # X Delta = Delta tau(X)
            self.factors = [tau(f) for f in self.factors]
            self.inf += 1
            return
        fs = self.factors
        fs.append(x)
        for j in range(len(fs) - 2, -1, -1):
            a, b = _left_weight(fs[j], fs[j + 1])
            if (a, b) == (fs[j], fs[j + 1]):
                break
            fs[j], fs[j + 1] = a, b
        # Deltas float to the front, identities sink to the back.
        while fs and fs[-1] == self.ident:
            fs.pop()
        lead = 0
        while lead < len(fs) and fs[lead] == self.delta:
            lead += 1
        if lead:
            del fs[:lead]
            self.inf += lead

    def push_letter(self, x: int) -> None:
        m = self.m
        if x > 0:
            self.push_simple(_swap(m, x))
        else:
            # sigma_i^-1 = Delta^-1 (Delta sigma_i^-1); move Delta^-1 to the front.
            s = _swap(m, -x)
            comp = tuple(s[self.delta[j]] for j in range(m))
            self.factors = [tau(f) for f in self.factors]
            self.inf -= 1
            self.push_simple(comp)

    def result(self) -> NormalForm:
        return NormalForm(self.m, self.inf, tuple(self.factors))


def classical_normal_form(w: Iterable[int], m: int) -> NormalForm:
    b = _Builder(m)
    for x in w:
        if not 1 <= abs(x) <= m - 1:
            raise WordError(f"generator {x} out of range for B_{m}")
        b.push_letter(x)
    return b.result()


def classical_equal(u: Sequence[int], v: Sequence[int], m: int) -> bool:
    return classical_normal_form(u, m) == classical_normal_form(v, m)


def normal_form(u: BraidWord) -> NormalForm:
    return classical_normal_form(embed(u), u.g + u.n)


def equal(u: BraidWord, v: BraidWord) -> bool:
    if u.signature != v.signature:
        raise WordError(f"signature mismatch {u.signature} vs {v.signature}")
    return normal_form(u) == normal_form(v)


def is_trivial(u: BraidWord) -> bool:
    nf = normal_form(u)
    return nf.infimum == 0 and not nf.factors
