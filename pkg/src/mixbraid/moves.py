"""
Equivalence moves on algebraic mixed braids.

Every move here maps a word to a word; none of them looks at group equality
except :func:`is_allowed_loop_conjugator` and certificate replay of ``relator``
steps, which go through the word problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import garside
from .words import (
    HANDLE,
    LOOP,
    SIGMA,
    BraidWord,
    Letter,
    WordError,
    a_exponent_vector,
    b_to_a,
    format_letters,
    invert_letters,
    parse_word,
    power,
)

MOVE_KINDS = (
    "L_o",
    "L_u",
    "stabilize",
    "destabilize",
    "sigma_conjugate",
    "omega_commute",
    "relator",
    "free_reduce",
)


def _sig(i: int, e: int = 1) -> Letter:
    return (SIGMA, i, e)


def _check_split(u: BraidWord, split: int) -> None:
    if not 0 <= split <= len(u):
        raise WordError(f"split {split} outside 0..{len(u)}")


def stabilize(u: BraidWord, split: int, sign: int) -> BraidWord:
    """beta_1 beta_2 -> beta_1 sigma_n^sign beta_2 in B_{g,n+1}."""
    _check_split(u, split)
    if sign not in (1, -1):
        raise WordError("sign must be +1 or -1")
    n = u.n
    w = u.units()
    return BraidWord(u.g, n + 1, w[:split] + (_sig(n, sign),) + w[split:], raw=u.raw)


def find_destabilizations(u: BraidWord) -> list[tuple[int, int]]:
    """Splits where u reads beta_1 sigma_{n-1}^{+-1} beta_2 with the top
    generator occurring nowhere else. Splits count unit letters."""
    if u.n < 2:
        return []
    top = u.n - 1
    w = u.units()
    hits = [j for j, (k, i, _) in enumerate(w) if k == SIGMA and i == top]
    if len(hits) != 1:
        return []
    j = hits[0]
    return [(j, w[j][2])]


def destabilize(u: BraidWord, split: int, sign: int) -> BraidWord:
    """Inverse of :func:`stabilize`; ``split`` indexes the sigma_{n-1} letter."""
    if (split, sign) not in find_destabilizations(u):
        raise WordError(f"no destabilization at split {split} with sign {sign}")
    w = u.units()
    return BraidWord(u.g, u.n - 1, w[:split] + w[split + 1 :], raw=u.raw)


def apply_l_move(u: BraidWord, split: int, i: int, sign: int, kind: str = "o") -> BraidWord:
    """Algebraic L-move at strand position i between u[:split] and u[split:].

    L_o:  s_i^-1..s_n^-1 A1 s_i^-1..s_{n-1}^-1 s_n^+-1 s_{n-1}..s_i A2 s_n..s_i
    L_u:  s_i..s_n A1 s_i..s_{n-1} s_n^+-1 s_{n-1}^-1..s_i^-1 A2 s_n^-1..s_i^-1

    The middle block is a conjugate of s_n^+-1 by a word in B_{g,n}, so the
    result destabilizes back to a sigma-conjugate of u. For i = n+1 this is
    exactly :func:`stabilize`.
    """
    _check_split(u, split)
    n = u.n
    if not 1 <= i <= n + 1:
        raise WordError(f"strand index {i} outside 1..{n + 1}")
    if sign not in (1, -1):
        raise WordError("sign must be +1 or -1")
    if kind not in ("o", "u"):
        raise WordError("L-move type must be 'o' or 'u'")
    eps = -1 if kind == "o" else 1
    prefix = tuple(_sig(k, eps) for k in range(i, n + 1))
    suffix = invert_letters(prefix)
    up = tuple(_sig(k, eps) for k in range(i, n))
    middle = up + (_sig(n, sign),) + invert_letters(up)
    w = u.units()
    a1, a2 = w[:split], w[split:]
    return BraidWord(u.g, n + 1, prefix + a1 + middle + a2 + suffix, raw=u.raw)


def sigma_conjugate(u: BraidWord, i: int, sign: int) -> BraidWord:
    """sigma_i^-sign u sigma_i^sign."""
    if not 1 <= i <= u.n - 1:
        raise WordError(f"sigma_{i} not in B_{{{u.g},{u.n}}}")
    if sign not in (1, -1):
        raise WordError("sign must be +1 or -1")
    return BraidWord(u.g, u.n, (_sig(i, -sign),) + u.letters + (_sig(i, sign),), raw=u.raw)


def maximal_loop(g: int, n: int = 1) -> BraidWord:
    """omega = a_1 a_2 ... a_g."""
    if g < 1:
        raise WordError("the maximal loop needs g >= 1")
    return BraidWord(g, n, tuple((HANDLE, j, 1) for j in range(1, g + 1)))


def _omega_letters(g: int) -> tuple[Letter, ...]:
    return tuple((HANDLE, j, 1) for j in range(1, g + 1))


def omega_commute(u: BraidWord, side: str = "right") -> BraidWord:
    """alpha omega -> omega alpha (side='right') or omega alpha -> alpha omega
    (side='left'); omega must be literally present at that end."""
    if u.g < 1:
        raise WordError("no maximal loop for g = 0")
    om = _omega_letters(u.g)
    k = len(om)
    # Literal at the level of unit letters: a_1^2 a_2 ends with omega for g=2.
    units = u.units()
    if side == "right":
        if tuple(units[-k:]) != om:
            raise WordError("word does not end with the maximal loop")
        return BraidWord(u.g, u.n, om + tuple(units[:-k]), raw=u.raw)
    if side == "left":
        if tuple(units[:k]) != om:
            raise WordError("word does not start with the maximal loop")
        return BraidWord(u.g, u.n, tuple(units[k:]) + om, raw=u.raw)
    raise WordError("side must be 'left' or 'right'")


def is_allowed_loop_conjugator(w: BraidWord) -> bool:
    """True iff the b-word w equals b_1^k for some integer k."""
    if any(kind != LOOP for kind, _, _ in w.letters):
        raise WordError("expected a word in the loop generators b_i only")
    a = b_to_a(w)
    vec = a_exponent_vector(a)
    k = vec[0] if vec else 0
    if any(x != k for x in vec):
        return False
    target = power(maximal_loop(w.g, w.n), k) if w.g else BraidWord(w.g, w.n)
    return garside.equal(a, target)


def label_flip_conjugator(position: int, g: int, n: int = 1) -> BraidWord:
    """Loop realising a label flip of an endpoint pair in gap ``position``
    (0 = left of all fixed strands, g = right of all of them)."""
    if not 0 <= position <= g:
        raise WordError(f"gap index {position} outside 0..{g}")
    if position == g:
        return BraidWord(g, n, ())
    return BraidWord(g, n, ((LOOP, position + 1, 1),))


# -- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class MoveStep:
    kind: str
    params: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in MOVE_KINDS:
            raise WordError(f"unknown move kind {self.kind!r}")

    def serialize(self) -> str:
        if self.kind == "relator":
            (target,) = self.params
            return f"relator {target.n} {format_letters(target.letters)}".rstrip()
        return " ".join([self.kind, *(str(p) for p in self.params)])

    @classmethod
    def parse(cls, line: str, g: int) -> MoveStep:
        kind, *rest = line.split()
        if kind == "relator":
            n = int(rest[0])
            return cls(kind, (parse_word(f"g={g} n={n}; " + " ".join(rest[1:]), raw=True),))
        if kind in ("L_o", "L_u"):
            split, i, sign = map(int, rest)
            return cls(kind, (split, i, sign))
        if kind == "omega_commute":
            return cls(kind, (rest[0],))
        return cls(kind, tuple(int(x) for x in rest))


class StepError(WordError):
    def __init__(self, index: int, message: str) -> None:
        super().__init__(f"step {index}: {message}")
        self.index = index


def apply_step(u: BraidWord, step: MoveStep) -> BraidWord:
    k, p = step.kind, step.params
    if k == "stabilize":
        return stabilize(u, *p)
    if k == "destabilize":
        return destabilize(u, *p)
    if k == "sigma_conjugate":
        return sigma_conjugate(u, *p)
    if k in ("L_o", "L_u"):
        split, i, sign = p
        return apply_l_move(u, split, i, sign, k[-1])
    if k == "omega_commute":
        return omega_commute(u, *p)
    if k == "free_reduce":
        return u.reduced()
    if k == "relator":
        (target,) = p
        if target.signature != u.signature or not garside.equal(u, target):
            raise WordError("relator step target is not equal to the current word")
        return target
    raise WordError(f"unhandled move kind {k}")


@dataclass(frozen=True)
class MoveCertificate:
    start: BraidWord
    steps: tuple[MoveStep, ...] = field(default=())
    end: BraidWord | None = None

    def serialize(self) -> str:
        lines = [f"start {self.start}"]
        lines += [s.serialize() for s in self.steps]
        if self.end is not None:
            lines.append(f"end {self.end}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> MoveCertificate:
        lines = [l.strip() for l in text.splitlines() if l.strip()]
        if not lines or not lines[0].startswith("start "):
            raise WordError("certificate must begin with a 'start' line")
        start = parse_word(lines[0][6:])
        end = None
        steps = []
        for line in lines[1:]:
            if line.startswith("end "):
                end = parse_word(line[4:])
            else:
                steps.append(MoveStep.parse(line, start.g))
        return cls(start, tuple(steps), end)

    def replay(self) -> BraidWord:
        cur = self.start
        for idx, step in enumerate(self.steps):
            try:
                cur = apply_step(cur, step)
            except WordError as exc:
                raise StepError(idx, str(exc)) from exc
        return cur
