"""
Bounded bidirectional breadth-first search for Markov equivalence.

States are braid group elements, keyed by (n, normal form), so the braid
relations cost nothing. The search grows one ball around each endpoint, a full
layer at a time, always extending the side with the smaller frontier. When the
balls touch, the two edge paths are turned into a :class:`MoveCertificate`
that uses only primitive steps: stabilize, destabilize, sigma_conjugate,
omega_commute (if enabled), relator and free_reduce.

Macro edges
-----------
``stab``     stabilization at a split of the representative word
``destab``   syntactic destabilization
``conj``     conjugation by a single sigma
``L``        algebraic L-move; expands to relator, stabilize, a run of
             sigma conjugations and free_reduce
``omega``    moving the maximal loop from one end to the other

Splits for L-moves may be *padded*: the word is factored as (A x)(x^-1 B) for a handle
generator or loop x. This reaches factorizations that free reduction hides,
e.g. omega | alpha when alpha starts with a_g^-1.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import garside
from .invariants import homology_functional, link_invariant, winding_profile
from .moves import (
    MoveCertificate,
    MoveStep,
    StepError,
    destabilize,
    find_destabilizations,
    maximal_loop,
    omega_commute,
    sigma_conjugate,
)
from .words import HANDLE, LOOP, SIGMA, BraidWord, Letter, WordError, invert_letters

PRIMITIVE_MOVES = frozenset({"stabilize", "destabilize", "sigma_conjugate"})
DEFAULT_MOVES = PRIMITIVE_MOVES | {"omega_commute"}
SEARCHABLE_MOVES = PRIMITIVE_MOVES | {"omega_commute", "L_o", "L_u"}
MARKOV_KINDS = ("stabilize", "destabilize", "sigma_conjugate", "omega_commute")


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 16
    max_n: int = 3
    max_states: int = 100_000
    move_set: frozenset = DEFAULT_MOVES
    padded_splits: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        if self.max_states <= 0:
            raise ValueError("max_states must be positive")
        if self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        unknown = set(self.move_set) - SEARCHABLE_MOVES
        if unknown:
            raise ValueError(f"moves not searchable: {sorted(unknown)}")
        object.__setattr__(self, "move_set", frozenset(self.move_set))


@dataclass(frozen=True)
class SearchOutcome:
    status: str  # "found" | "exhausted" | "budget-hit"
    certificate: MoveCertificate | None
    states_explored: int
    depth: int

    @property
    def found(self) -> bool:
        return self.status == "found"

    def report(self) -> str:
        lines = [f"status: {self.status}", f"depth: {self.depth}", f"states: {self.states_explored}"]
        if self.certificate is not None:
            lines.append(f"markov steps: {markov_step_count(self.certificate)}")
            lines.append("certificate:")
            lines.append(self.certificate.serialize().rstrip("\n"))
        else:
            lines.append("no certificate within budget (evidence, not proof of non-equivalence)")
        return "\n".join(lines) + "\n"


def markov_step_count(cert: MoveCertificate) -> int:
    return sum(1 for s in cert.steps if s.kind in MARKOV_KINDS or s.kind in ("L_o", "L_u"))


def verify_certificate(cert: MoveCertificate) -> bool:
    """Replay every step; True iff the replay ends at ``cert.end`` (after free
    reduction). Raises :class:`StepError` with the failing index if a step does
    not apply."""
    cur = cert.replay()
    if cert.end is None:
        return True
    return cur.reduced() == cert.end


# -- macro edges ----------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    kind: str
    params: tuple


def _pads(g: int) -> list[tuple[Letter, ...]]:
    """Padding words: a_j^+-1 and the loops b_j^+-1 (j < g) in handle letters."""
    out: list[tuple[Letter, ...]] = []
    for j in range(1, g + 1):
        out.append(((HANDLE, j, 1),))
        out.append(((HANDLE, j, -1),))
    for j in range(1, g):
        loop = tuple((HANDLE, k, 1) for k in range(j, g + 1))
        out.append(loop)
        out.append(invert_letters(loop))
    return out


def _factor(units: Sequence[Letter], split: int, pad: tuple[Letter, ...]) -> tuple[tuple, tuple]:
    return tuple(units[:split]) + pad, invert_letters(pad) + tuple(units[split:])


def _l_blocks(n: int, i: int, kind: str) -> tuple[tuple, tuple]:
    eps = -1 if kind == "o" else 1
    prefix = tuple((SIGMA, k, eps) for k in range(i, n + 1))
    up = tuple((SIGMA, k, eps) for k in range(i, n))
    return prefix, up


def _l_word(g: int, n: int, left: tuple, right: tuple, i: int, sign: int, kind: str) -> BraidWord:
    prefix, up = _l_blocks(n, i, kind)
    middle = up + ((SIGMA, n, sign),) + invert_letters(up)
    return BraidWord(g, n + 1, prefix + left + middle + right + invert_letters(prefix), raw=True)


def apply_edge(u: BraidWord, edge: Edge) -> BraidWord:
    """Reduced result of a macro edge applied to the reduced word u."""
    k, p = edge.kind, edge.params
    if k == "stab":
        split, pad, sign = p
        left, right = _factor(u.units(), split, pad)
        return BraidWord(u.g, u.n + 1, left + ((SIGMA, u.n, sign),) + right)
    if k == "L":
        kind, split, pad, i, sign = p
        left, right = _factor(u.units(), split, pad)
        return _l_word(u.g, u.n, left, right, i, sign, kind).reduced()
    if k == "destab":
        return destabilize(u, *p)
    if k == "conj":
        return sigma_conjugate(u, *p)
    if k == "omega":
        return omega_commute(u, *p)
    raise WordError(f"unknown edge kind {k}")


def neighbours(u: BraidWord, budget: SearchBudget) -> list[tuple[Edge, BraidWord]]:
    moves = budget.move_set
    out: list[tuple[Edge, BraidWord]] = []
    units_len = len(u)
    pads: list[tuple[Letter, ...]] = [()]
    if budget.padded_splits:
        pads += _pads(u.g)
    if u.n < budget.max_n:
        for split in range(units_len + 1):
            if "stabilize" in moves:
                for sign in (1, -1):
                    out.append(Edge("stab", (split, (), sign)))
            for pad in pads:
                for kind in ("o", "u"):
                    if f"L_{kind}" not in moves:
                        continue
                    for i in range(1, u.n + 1):
                        for sign in (1, -1):
                            out.append(Edge("L", (kind, split, pad, i, sign)))
    if "destabilize" in moves:
        for split, sign in find_destabilizations(u):
            out.append(Edge("destab", (split, sign)))
    if "sigma_conjugate" in moves:
        for i in range(1, u.n):
            for sign in (1, -1):
                out.append(Edge("conj", (i, sign)))
    if "omega_commute" in moves and u.g >= 1:
        for side in ("right", "left"):
            out.append(Edge("omega", (side,)))
    result = []
    for e in out:
        try:
            result.append((e, apply_edge(u, e)))
        except WordError:
            continue
    return result


def state_key(u: BraidWord) -> tuple:
    return (u.n, garside.normal_form(u).key())


def _expand(args: tuple[BraidWord, SearchBudget]) -> list[tuple[Edge, BraidWord, tuple]]:
    u, budget = args
    return [(e, w, state_key(w)) for e, w in neighbours(u, budget)]


# -- turning edges into primitive steps -------------------------------------------


def _relator(w: BraidWord) -> MoveStep:
    return MoveStep("relator", (w,))


def forward_steps(u: BraidWord, edge: Edge) -> list[MoveStep]:
    """Primitive steps taking the literal word u to apply_edge(u, edge)."""
    k, p = edge.kind, edge.params
    if k == "stab":
        split, pad, sign = p
        if not pad:
            return [MoveStep("stabilize", (split, sign))]
        left, right = _factor(u.units(), split, pad)
        return [
            _relator(BraidWord(u.g, u.n, left + right, raw=True)),
            MoveStep("stabilize", (len(left), sign)),
            MoveStep("free_reduce"),
        ]
    if k == "L":
        kind, split, pad, i, sign = p
        left, right = _factor(u.units(), split, pad)
        _, up = _l_blocks(u.n, i, kind)
        eps = up[0][2] if up else (-1 if kind == "o" else 1)
        steps = [
            _relator(BraidWord(u.g, u.n, left + up + invert_letters(up) + right, raw=True)),
            MoveStep("stabilize", (len(left) + len(up), sign)),
        ]
        # sigma_conjugate(w, k, s) = s_k^-s w s_k^s; the prefix reads s_i^eps .. s_n^eps.
        steps += [MoveStep("sigma_conjugate", (j, -eps)) for j in range(u.n, i - 1, -1)]
        steps.append(MoveStep("free_reduce"))
        return steps
    if k == "destab":
        return [MoveStep("destabilize", p)]
    if k == "conj":
        return [MoveStep("sigma_conjugate", p)]
    if k == "omega":
        return [MoveStep("omega_commute", p)]
    raise WordError(f"unknown edge kind {k}")


def backward_steps(u: BraidWord, edge: Edge) -> list[MoveStep]:
    """Primitive steps taking apply_edge(u, edge) back to the literal word u."""
    k, p = edge.kind, edge.params
    if k == "stab":
        split, pad, sign = p
        left, right = _factor(u.units(), split, pad)
        raw = BraidWord(u.g, u.n + 1, left + ((SIGMA, u.n, sign),) + right, raw=True)
        return [_relator(raw), MoveStep("destabilize", (len(left), sign)), MoveStep("free_reduce")]
    if k == "L":
        kind, split, pad, i, sign = p
        left, right = _factor(u.units(), split, pad)
        raw = _l_word(u.g, u.n, left, right, i, sign, kind)
        eps = -1 if kind == "o" else 1
        steps = [_relator(raw)]
        steps += [MoveStep("sigma_conjugate", (j, eps)) for j in range(i, u.n + 1)]
        steps.append(MoveStep("free_reduce"))
        cur = raw
        for s in steps[1:]:
            cur = _apply(cur, s)
        ((dsplit, dsign),) = find_destabilizations(cur)
        steps += [MoveStep("destabilize", (dsplit, dsign)), MoveStep("free_reduce")]
        return steps
    if k == "destab":
        split, sign = p
        units = u.units()
        raw = BraidWord(u.g, u.n - 1, units[:split] + units[split + 1 :], raw=True)
        return [_relator(raw), MoveStep("stabilize", (split, sign)), MoveStep("free_reduce")]
    if k == "conj":
        i, sign = p
        return [MoveStep("sigma_conjugate", (i, -sign))]
    if k == "omega":
        (side,) = p
        om = maximal_loop(u.g, u.n).letters
        units = u.units()
        n_om = len(om)
        if side == "right":
            raw = BraidWord(u.g, u.n, om + tuple(units[:-n_om]), raw=True)
            back = "left"
        else:
            raw = BraidWord(u.g, u.n, tuple(units[n_om:]) + om, raw=True)
            back = "right"
        return [_relator(raw), MoveStep("omega_commute", (back,)), MoveStep("free_reduce")]
    raise WordError(f"unknown edge kind {k}")


def _apply(u: BraidWord, step: MoveStep) -> BraidWord:
    from .moves import apply_step

    return apply_step(u, step)


class _Assembler:
    """Accumulates steps while tracking the current word, inserting a relator
    step whenever the next block expects a different spelling."""

    def __init__(self, start: BraidWord) -> None:
        self.start = start
        self.cur = start
        self.steps: list[MoveStep] = []

    def goto(self, w: BraidWord) -> None:
        if self.cur.letters != w.letters or self.cur.raw != w.raw or self.cur.n != w.n:
            self.push([_relator(w)])

    def push(self, steps: Iterable[MoveStep]) -> None:
        for s in steps:
            if s.kind == "relator" and s.params[0].letters == self.cur.letters and s.params[0].n == self.cur.n:
                if s.params[0].raw == self.cur.raw:
                    continue
            self.cur = _apply(self.cur, s)
            self.steps.append(s)


# -- the search -------------------------------------------------------------------


@dataclass
class _Side:
    states: dict = field(default_factory=dict)  # key -> (rep, parent key, edge)
    frontier: list = field(default_factory=list)
    depth: int = 0


def _path(side: _Side, key: tuple) -> list[tuple[BraidWord, Edge]]:
    """(parent rep, edge) pairs from the root to ``key``."""
    out = []
    while True:
        rep, parent, edge = side.states[key]
        if parent is None:
            break
        out.append((side.states[parent][0], edge))
        key = parent
    return out[::-1]


def _certificate(u: BraidWord, v: BraidWord, a: _Side, b: _Side, key: tuple) -> MoveCertificate:
    asm = _Assembler(u)
    for rep, edge in _path(a, key):
        asm.goto(rep)
        asm.push(forward_steps(rep, edge))
    for rep, edge in reversed(_path(b, key)):
        asm.goto(apply_edge(rep, edge))
        asm.push(backward_steps(rep, edge))
    asm.goto(v)
    return MoveCertificate(u, tuple(asm.steps), v)


def _check_inputs(u: BraidWord, v: BraidWord, budget: SearchBudget) -> None:
    if u.g != v.g:
        raise WordError("endpoints must have the same genus")
    if u.family == LOOP or v.family == LOOP:
        raise WordError("search expects words in the a-generators")
    if budget.max_n < max(u.n, v.n):
        raise ValueError("max_n below the strand count of an endpoint")


def equivalence_search(u: BraidWord, v: BraidWord, budget: SearchBudget | None = None) -> SearchOutcome:
    budget = budget or SearchBudget()
    _check_inputs(u, v, budget)
    u, v = u.reduced(), v.reduced()
    a, b = _Side(), _Side()
    ka, kb = state_key(u), state_key(v)
    a.states[ka] = (u, None, None)
    b.states[kb] = (v, None, None)
    a.frontier, b.frontier = [ka], [kb]

    def done(key: tuple) -> SearchOutcome:
        cert = _certificate(u, v, a, b, key)
        _assert_sound(cert)
        return SearchOutcome("found", cert, len(a.states) + len(b.states), a.depth + b.depth)

    if ka == kb:
        return done(ka)

    pool = ProcessPoolExecutor(budget.workers) if budget.workers > 1 else None
    try:
        while a.depth + b.depth < budget.max_depth:
            if not a.frontier and not b.frontier:
                break
            if a.frontier and (len(a.frontier) <= len(b.frontier) or not b.frontier):
                side, other = a, b
            else:
                side, other = b, a
            jobs = [(side.states[k][0], budget) for k in side.frontier]
            results = pool.map(_expand, jobs, chunksize=8) if pool else map(_expand, jobs)
            new_frontier = []
            side.depth += 1
            for parent, nbrs in zip(side.frontier, results):
                for edge, w, key in nbrs:
                    if key in side.states:
                        continue
                    side.states[key] = (w, parent, edge)
                    new_frontier.append(key)
                    if key in other.states:
                        return done(key)
                    if len(a.states) + len(b.states) >= budget.max_states:
                        return SearchOutcome("budget-hit", None, len(a.states) + len(b.states), a.depth + b.depth)
            side.frontier = new_frontier
    finally:
        if pool:
            pool.shutdown()
    return SearchOutcome("exhausted", None, len(a.states) + len(b.states), a.depth + b.depth)


def _assert_sound(cert: MoveCertificate) -> None:
    try:
        ok = verify_certificate(cert)
    except StepError as exc:  # pragma: no cover - would be a bug in the assembler
        raise AssertionError(f"emitted certificate does not replay: {exc}") from exc
    if not ok:  # pragma: no cover
        raise AssertionError("emitted certificate ends at the wrong word")
    start, end = cert.start, cert.end
    if start.g >= 1:
        f = homology_functional(start.g)
        if link_invariant(start, f) != link_invariant(end, f):  # pragma: no cover
            raise AssertionError("link invariant differs across a certificate")
    if winding_profile(start) != winding_profile(end):  # pragma: no cover
        raise AssertionError("winding profile differs across a certificate")
