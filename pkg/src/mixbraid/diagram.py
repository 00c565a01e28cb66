"""
Mixed link diagrams as Morse event sequences.

A diagram is read top to bottom, one event per row. Between rows the diagram
is a row of vertical strand pieces called slots. Events, with 1-based
positions:

``cap p``   a local maximum; two new slots appear at p, p+1
``cup p``   a local minimum; slots p, p+1 end
``x+ p``    slots p and p+1 cross; the strand moving from p to p+1 is over
``x- p``    slots p and p+1 cross; the strand moving from p+1 to p is over

A cap may carry a label hint ``o``/``u`` used when the up-arc it tops has no
crossings, and the flag ``rev`` when its right leg is the one going down.

An optional ``boundary`` line lists one tag per top slot: ``F`` for a strand of
the fixed part I_g, or ``o``/``u`` for a moving endpoint whose partner is the
bottom endpoint with the same index. Without it the boundary is ``F`` * g.

Orientation: fixed strands and open moving strands run downward; a closed
moving loop runs down the leg its caps mark (left leg unless ``rev``).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from importlib import resources
from functools import lru_cache
from typing import Iterable, Sequence

from . import garside
from .invariants import WindingProfile
from .words import HANDLE, SIGMA, BraidWord, embed, format_classical

FIXED = "F"
LABELS = ("o", "u")
CAP, CUP, CROSS = "cap", "cup", "x"


class DiagramError(ValueError):
    """Malformed diagram or inapplicable move."""


@dataclass(frozen=True)
class MorseEvent:
    kind: str
    position: int
    sign: int = 0
    label: str | None = None
    reverse: bool = False  # caps only: the right leg is the one going down

    def __post_init__(self) -> None:
        if self.kind not in (CAP, CUP, CROSS):
            raise DiagramError(f"unknown event kind {self.kind!r}")
        if self.position < 1:
            raise DiagramError("event positions are 1-based")
        if self.kind == CROSS and self.sign not in (1, -1):
            raise DiagramError("crossings need sign +1 or -1")
        if self.kind != CROSS and self.sign:
            raise DiagramError("only crossings carry a sign")
        if self.label is not None and (self.kind != CAP or self.label not in LABELS):
            raise DiagramError("only caps carry a label hint o/u")
        if self.reverse and self.kind != CAP:
            raise DiagramError("only caps carry an orientation flag")

    def at(self, position: int) -> MorseEvent:
        return replace(self, position=position)

    @property
    def arity(self) -> tuple[int, int]:
        return {CAP: (0, 2), CUP: (2, 0), CROSS: (2, 2)}[self.kind]

    def __str__(self) -> str:
        if self.kind == CROSS:
            return f"x{'+' if self.sign > 0 else '-'} {self.position}"
        hint = f" {self.label}" if self.label else ""
        rev = " rev" if self.reverse else ""
        return f"{self.kind} {self.position}{hint}{rev}"


def cap(p: int, label: str | None = None, reverse: bool = False) -> MorseEvent:
    return MorseEvent(CAP, p, 0, label, reverse)


def cup(p: int) -> MorseEvent:
    return MorseEvent(CUP, p)


def cross(p: int, sign: int) -> MorseEvent:
    return MorseEvent(CROSS, p, sign)


@dataclass(frozen=True)
class MixedDiagram:
    g: int
    rows: tuple[MorseEvent, ...] = ()
    boundary: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.boundary is None:
            object.__setattr__(self, "boundary", (FIXED,) * self.g)
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "boundary", tuple(self.boundary))

    def widths(self) -> list[int]:
        w = [len(self.boundary)]
        for e in self.rows:
            i, o = e.arity
            if e.position - 1 + i > w[-1] or (e.kind == CAP and e.position - 1 > w[-1]):
                raise DiagramError(f"row {len(w) - 1}: position {e.position} outside width {w[-1]}")
            w.append(w[-1] - i + o)
        return w

    @property
    def trace(self) -> Trace:
        """Derived identification of strands (the strand trace)."""
        return _trace(self)

    @property
    def fixed_strands(self) -> list[int]:
        return [c.index for c in self.trace.components if c.fixed]


# -- text format ---------------------------------------------------------------------


def format_diagram(d: MixedDiagram) -> str:
    lines = [f"g={d.g}"]
    if d.boundary != (FIXED,) * d.g:
        lines.append("boundary " + " ".join(d.boundary))
    lines += [str(e) for e in d.rows]
    return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> MixedDiagram:
    g = None
    boundary = None
    rows = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if g is None:
            if not line.startswith("g="):
                raise DiagramError(f"line {n}: expected header g=<int>")
            g = int(line[2:])
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head == "boundary":
                boundary = tuple(parts[1:])
            elif head in ("cap", "cup"):
                extra = parts[2:]
                rev = "rev" in extra
                extra = [x for x in extra if x != "rev"]
                if len(extra) > 1 or (rev and head != "cap"):
                    raise DiagramError(f"unexpected tokens {' '.join(parts[2:])!r}")
                rows.append(MorseEvent(head, int(parts[1]), 0, extra[0] if extra else None, rev))
            elif head in ("x+", "x-"):
                rows.append(cross(int(parts[1]), 1 if head == "x+" else -1))
            else:
                raise DiagramError(f"unknown event {head!r}")
        except (IndexError, ValueError) as exc:
            raise DiagramError(f"line {n}: {exc}") from exc
    if g is None:
        raise DiagramError("empty diagram file")
    return MixedDiagram(g, tuple(rows), boundary)


# -- strand tracing --------------------------------------------------------------------

# A piece is the slot (level, k): the strand segment between row level-1 and
# row level at slot k. Level 0 touches the top boundary, level R the bottom.


@dataclass
class Component:
    index: int
    fixed: bool
    closed: bool
    label: str | None
    steps: list[tuple[int, int, int]]  # (level, slot, direction) with +1 = down
    caps: int = 0


@dataclass
class Trace:
    diagram: MixedDiagram
    widths: list[int]
    components: list[Component]
    owner: dict[tuple[int, int], tuple[int, int]]  # piece -> (component, step index)

    @classmethod
    def of(cls, d: MixedDiagram) -> Trace:
        widths = d.widths()
        R = len(d.rows)
        # below[(r, k)]: what the bottom end of piece (r, k) meets; above: the top end.
        below: dict[tuple[int, int], tuple] = {}
        above: dict[tuple[int, int], tuple] = {}
        for r, e in enumerate(d.rows):
            p = e.position - 1
            w = widths[r]
            for k in range(w):
                if k < p:
                    below[(r, k)] = ("piece", (r + 1, k))
                elif e.kind == CROSS and k in (p, p + 1):
                    below[(r, k)] = ("piece", (r + 1, 2 * p + 1 - k))
                elif e.kind == CUP and k in (p, p + 1):
                    below[(r, k)] = ("turn", (r, 2 * p + 1 - k))
                else:
                    i, o = e.arity
                    below[(r, k)] = ("piece", (r + 1, k - i + o))
            for k in range(widths[r + 1]):
                if k < p:
                    above[(r + 1, k)] = ("piece", (r, k))
                elif e.kind == CROSS and k in (p, p + 1):
                    above[(r + 1, k)] = ("piece", (r, 2 * p + 1 - k))
                elif e.kind == CAP and k in (p, p + 1):
                    above[(r + 1, k)] = ("turn", (r + 1, 2 * p + 1 - k))
                else:
                    i, o = e.arity
                    above[(r + 1, k)] = ("piece", (r, k + i - o))
        for k in range(widths[0]):
            above[(0, k)] = ("top", k)
        for k in range(widths[R]):
            below[(R, k)] = ("bottom", k)

        def walk(start: tuple[int, int], direction: int) -> tuple[list, tuple]:
            steps = []
            cur, dr = start, direction
            seen = set()
            while True:
                if (cur, dr) in seen:
                    return steps, ("loop",)
                seen.add((cur, dr))
                steps.append((cur[0], cur[1], dr))
                nxt = below[cur] if dr > 0 else above[cur]
                if nxt[0] in ("top", "bottom"):
                    return steps, nxt
                if nxt[0] == "turn":
                    cur, dr = nxt[1], -dr
                else:
                    cur = nxt[1]
                if cur == start and dr == direction:
                    return steps, ("loop",)

        comps: list[Component] = []
        owner: dict[tuple[int, int], tuple[int, int]] = {}

        def register(steps: list, fixed: bool, closed: bool, label: str | None) -> None:
            idx = len(comps)
            c = Component(idx, fixed, closed, label, steps)
            for j, (lv, k, _) in enumerate(steps):
                owner[(lv, k)] = (idx, j)
            comps.append(c)

        for k, tag in enumerate(d.boundary):
            if (0, k) in owner:
                continue
            steps, end = walk((0, k), 1)
            if end[0] != "bottom":
                raise DiagramError(f"strand entering the top at slot {k + 1} does not reach the bottom")
            register(steps, tag == FIXED, False, None if tag == FIXED else tag)
        for r, e in enumerate(d.rows):
            if e.kind != CAP:
                continue
            piece = (r + 1, e.position - (0 if e.reverse else 1))
            if piece in owner:
                continue
            steps, end = walk(piece, 1)
            if end[0] != "loop":
                raise DiagramError(f"row {r}: cap belongs to an open strand that was not traced")
            register(steps, False, True, None)
        all_pieces = sum(widths)
        if len(owner) != all_pieces:
            raise DiagramError("some strand pieces belong to no component")
        trace = cls(d, widths, comps, owner)
        for c in comps:
            c.caps = sum(1 for r in trace.turns(c) if r[0] == CAP)
        return trace

    def turns(self, comp: Component) -> list[tuple[str, int]]:
        """(kind, row) of every cap and cup met along the component."""
        out = []
        steps = comp.steps
        for j in range(len(steps) - (0 if comp.closed else 1)):
            a, b = steps[j], steps[(j + 1) % len(steps)]
            if a[2] != b[2]:
                out.append((CUP if a[2] > 0 else CAP, a[0] if a[2] > 0 else a[0] - 1))
        return out

    def crossings(self) -> list[tuple[int, int, int, int, int]]:
        """(row, over component, under component, oriented sign, raw sign)."""
        out = []
        for r, e in enumerate(self.diagram.rows):
            if e.kind != CROSS:
                continue
            p = e.position - 1
            # the strand from (r, p) to (r+1, p+1) is over iff sign > 0
            a = self.owner[(r, p)]
            b = self.owner[(r, p + 1)]
            da = self.components[a[0]].steps[a[1]][2]
            db = self.components[b[0]].steps[b[1]][2]
            over, under = (a, b) if e.sign > 0 else (b, a)
            out.append((r, over[0], under[0], e.sign * da * db, e.sign))
        return out


@lru_cache(maxsize=256)
def _trace(d: MixedDiagram) -> Trace:
    return Trace.of(d)


# -- validation -------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    row: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate(d: MixedDiagram) -> ValidationReport:
    if d.g < 0:
        return ValidationReport(False, None, "negative genus")
    for t in d.boundary:
        if t not in (FIXED,) + LABELS:
            return ValidationReport(False, None, f"bad boundary tag {t!r}")
    if d.boundary.count(FIXED) != d.g:
        return ValidationReport(False, None, f"boundary has {d.boundary.count(FIXED)} fixed strands, expected {d.g}")
    try:
        tr = _trace(d)
    except DiagramError as exc:
        return ValidationReport(False, None, str(exc))
    R = len(d.rows)
    # bottom tags must repeat the top tags index by index
    bottom: dict[int, str] = {}
    for c in tr.components:
        if c.closed:
            continue
        lv, k, _ = c.steps[-1]
        bottom[k] = c.fixed
    if [bottom[k] for k in range(tr.widths[R])] != [t == FIXED for t in d.boundary]:
        return ValidationReport(False, None, "fixed strands must end in their own columns")
    for c in tr.components:
        if c.fixed:
            for lv, k, dr in c.steps:
                if dr < 0:
                    return ValidationReport(False, lv, "a fixed strand turns (cap or cup on a fixed strand)")
    for r, e in enumerate(d.rows):
        if e.kind == CAP:
            ci, j = tr.owner[(r + 1, e.position - (0 if e.reverse else 1))]
            if tr.components[ci].steps[j][2] < 0:
                return ValidationReport(False, r, "cap orientation disagrees with its loop")
            comp = tr.components[ci]
            if comp.fixed:
                return ValidationReport(False, r, "cap on a fixed strand")
        if e.kind == CUP:
            comp = tr.components[tr.owner[(r, e.position - 1)][0]]
            if comp.fixed:
                return ValidationReport(False, r, "cup on a fixed strand")
    for r, over, under, _, _ in tr.crossings():
        if tr.components[over].fixed and tr.components[under].fixed:
            return ValidationReport(False, r, "crossing between two fixed strands")
    return ValidationReport(True)


@lru_cache(maxsize=256)
def _require_valid(d: MixedDiagram) -> Trace:
    rep = validate(d)
    if not rep.ok:
        where = f" (row {rep.row})" if rep.row is not None else ""
        raise DiagramError(f"invalid diagram{where}: {rep.message}")
    return _trace(d)


# -- closure components and winding ----------------------------------------------------


def _closure_classes(tr: Trace) -> list[list[int]]:
    """Moving components glued by the virtual closure arcs (top i to bottom i)."""
    by_top = {}
    by_bottom = {}
    for c in tr.components:
        if c.fixed or c.closed:
            continue
        by_top[c.steps[0][1]] = c.index
        by_bottom[c.steps[-1][1]] = c.index
    parent = {c.index: c.index for c in tr.components if not c.fixed}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, ci in by_top.items():
        cj = by_bottom[k]
        parent[find(ci)] = find(cj)
    groups: dict[int, list[int]] = {}
    for ci in sorted(parent):
        groups.setdefault(find(ci), []).append(ci)
    return list(groups.values())


def component_count(d: MixedDiagram) -> int:
    return len(_closure_classes(_require_valid(d)))


def diagram_winding(d: MixedDiagram) -> WindingProfile:
    """Per moving component (after closing boundary pairs): linking numbers with
    the fixed strands F_1..F_g, numbered left to right at the top."""
    tr = _require_valid(d)
    fixed_order = [c.index for c in sorted((c for c in tr.components if c.fixed), key=lambda c: c.steps[0][1])]
    fpos = {ci: j for j, ci in enumerate(fixed_order)}
    classes = _closure_classes(tr)
    cls_of = {ci: n for n, cl in enumerate(classes) for ci in cl}
    sums = [[Fraction(0)] * d.g for _ in classes]
    for _, over, under, osign, _ in tr.crossings():
        for a, b in ((over, under), (under, over)):
            if a in cls_of and b in fpos:
                sums[cls_of[a]][fpos[b]] += Fraction(osign, 2)
    comps = []
    for n, cl in enumerate(classes):
        vec = []
        for x in sums[n]:
            if x.denominator != 1:
                raise DiagramError("half-integral linking number; diagram closure is inconsistent")
            vec.append(int(x))
        strands = sum(tr.components[ci].caps for ci in cl) + sum(
            1 for ci in cl if not tr.components[ci].closed
        )
        comps.append((strands, tuple(vec)))
    return WindingProfile.from_components(comps)


# -- geometric mixed braids ---------------------------------------------------------------


@dataclass(frozen=True)
class GeometricMixedBraid:
    """A classical braid word (signed ints, +k = sigma_k) on g+n strands with a
    layout tag per column: ``F`` for a fixed strand, ``o``/``u`` for the label
    of the moving endpoint pair in that column."""

    g: int
    word: tuple[int, ...]
    layout: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "word", tuple(self.word))
        object.__setattr__(self, "layout", tuple(self.layout))
        problem = self.problem()
        if problem:
            raise DiagramError(problem)

    @property
    def strands(self) -> int:
        return len(self.layout)

    @property
    def n(self) -> int:
        return self.strands - self.g

    def problem(self) -> str | None:
        if any(t not in (FIXED,) + LABELS for t in self.layout):
            return "layout tags must be F, o or u"
        if self.layout.count(FIXED) != self.g:
            return f"layout has {self.layout.count(FIXED)} fixed columns, expected {self.g}"
        m = self.strands
        kinds = [t == FIXED for t in self.layout]
        for x in self.word:
            k = abs(x)
            if not 1 <= k < m:
                return f"generator s{k} outside 1..{m - 1}"
            if kinds[k - 1] and kinds[k]:
                return "fixed strands may not cross each other"
            kinds[k - 1], kinds[k] = kinds[k], kinds[k - 1]
        if kinds != [t == FIXED for t in self.layout]:
            return "fixed strands must end in their own columns"
        return None

    def __str__(self) -> str:
        return f"layout={''.join(self.layout)}; " + format_classical(self.word)


def parse_geometric(text: str, g: int | None = None) -> GeometricMixedBraid:
    """``layout=FoF; s1 s2^-1`` (g defaults to the number of F tags)."""
    head, _, body = text.partition(";")
    head = head.strip()
    if not head.startswith("layout="):
        raise DiagramError("expected 'layout=<tags>;'")
    layout = tuple(head[len("layout="):].strip())
    word = []
    for tok in body.split():
        base, _, exp = tok.partition("^")
        if not base.startswith("s"):
            raise DiagramError(f"bad token {tok!r}")
        e = int(exp) if exp else 1
        word += [int(base[1:]) * (1 if e > 0 else -1)] * abs(e)
    return GeometricMixedBraid(layout.count(FIXED) if g is None else g, tuple(word), layout)


def _arc_sign(label: str, moving_right: bool) -> int:
    """Crossing sign for a strand of the given label passing a neighbour."""
    over = label != "u"
    return (1 if over else -1) * (1 if moving_right else -1)


def close_geometric(b: GeometricMixedBraid) -> MixedDiagram:
    """Close every moving pair by an arc running right, over (o) or under (u)
    everything it meets; arcs of columns further left are nested outside."""
    rows: list[MorseEvent] = []
    movers = [c for c, t in enumerate(b.layout) if t != FIXED]
    fixed_right = {c: sum(1 for j in range(c + 1, b.strands) if b.layout[j] == FIXED) for c in movers}
    for c in movers:
        label = b.layout[c]
        rows.append(cap(c + 1, label))
        q = c + 1  # slot of the rising leg
        for _ in range(fixed_right[c]):
            rows.append(cross(q + 1, _arc_sign(label, True)))
            q += 1
    for x in b.word:
        rows.append(cross(abs(x), 1 if x > 0 else -1))
    for c in reversed(movers):
        label = b.layout[c]
        q = c + 1 + fixed_right[c]
        for _ in range(fixed_right[c]):
            rows.append(cross(q, _arc_sign(label, False)))
            q -= 1
        rows.append(cup(c + 1))
    return MixedDiagram(b.g, tuple(rows), (FIXED,) * b.g)


EXAMPLES = ("unknot_h1", "handle_pair_under", "handle_pair_over")


def load_example(name: str) -> MixedDiagram:
    """One of the bundled diagrams in EXAMPLES."""
    if name not in EXAMPLES:
        raise DiagramError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    text = resources.files("mixbraid").joinpath("data").joinpath(f"{name}.mxd").read_text()
    return parse_diagram(text)


def standard_layout(g: int, n: int, label: str = "o") -> tuple[str, ...]:
    return (FIXED,) * g + (label,) * n


def close_algebraic(u: BraidWord) -> MixedDiagram:
    """Closure of an algebraic mixed braid: arcs to the right of everything."""
    return close_geometric(GeometricMixedBraid(u.g, embed(u), standard_layout(u.g, u.n)))


# -- up-arcs ----------------------------------------------------------------------------


@dataclass(frozen=True)
class UpArc:
    """A maximal upward run of a moving component, cut where the crossing type
    changes. ``steps`` index into the component's step list, bottom first.
    ``top`` is (y, slot) with y = row + 0.5 for a cap and y = level for a cut
    inside a piece."""

    component: int
    steps: tuple[int, ...]
    crossing_type: str  # "o" | "u" | "free"
    top: tuple[float, int]
    top_is_cap: bool
    bottom_is_cup: bool
    hint: str | None = None


def find_up_arcs(d: MixedDiagram) -> list[UpArc]:
    tr = _require_valid(d)
    arcs: list[UpArc] = []
    for comp in tr.components:
        if comp.fixed:
            continue
        steps = comp.steps
        L = len(steps)
        ups = [j for j, s in enumerate(steps) if s[2] < 0]
        if not ups:
            continue
        # runs of consecutive upward steps (cyclically for closed loops)
        runs: list[list[int]] = []
        up_set = set(ups)
        starts = [j for j in ups if ((j - 1) % L if comp.closed else j - 1) not in up_set or (not comp.closed and j == 0)]
        for s0 in starts:
            run = [s0]
            j = s0
            while True:
                nj = (j + 1) % L if comp.closed else j + 1
                if nj >= L or nj not in up_set or nj == s0:
                    break
                run.append(nj)
                j = nj
            runs.append(run)
        for run in runs:
            arcs.extend(_split_run(tr, comp, run))
    arcs.sort(key=lambda a: (a.top, a.component))
    return arcs


def _crossing_between(tr: Trace, a: tuple[int, int, int], b: tuple[int, int, int]) -> tuple[int, bool] | None:
    """Crossing row passed going up from piece a to piece b, and whether the
    strand is over there."""
    r = a[0] - 1
    if r < 0 or b[0] != a[0] - 1:
        return None
    e = tr.diagram.rows[r]
    if e.kind != CROSS:
        return None
    p = e.position - 1
    if a[1] not in (p, p + 1):
        return None
    # going up from (r+1, a) to (r, b): downward it goes b -> a; b == p means left-to-right
    left_to_right = b[1] == p
    return r, (e.sign > 0) == left_to_right


def _split_run(tr: Trace, comp: Component, run: list[int]) -> list[UpArc]:
    """Cut an upward run between crossings of different type. Neighbouring
    arcs share the piece holding the cut point."""
    steps = comp.steps
    types: list[tuple[int, str]] = []  # crossing between run[t-1] and run[t]
    for t in range(1, len(run)):
        hit = _crossing_between(tr, steps[run[t - 1]], steps[run[t]])
        if hit:
            types.append((t, "o" if hit[1] else "u"))
    cuts = [t1 for (t1, a), (_, b) in zip(types, types[1:]) if a != b]
    bounds = [0] + cuts + [len(run) - 1]
    out = []
    for gi in range(len(bounds) - 1):
        lo, hi = bounds[gi], bounds[gi + 1]
        seg = run[lo : hi + 1]
        seg_types = {ty for t, ty in types if lo < t <= hi}
        ctype = seg_types.pop() if seg_types else "free"
        top_step = steps[seg[-1]]
        top_is_cap = gi == len(bounds) - 2
        hint = None
        if top_is_cap:
            cap_row = top_step[0] - 1
            ev = tr.diagram.rows[cap_row]
            hint = ev.label
            top = (cap_row + 0.5, ev.position - 1)
        else:
            top = (float(top_step[0]), top_step[1])
        out.append(UpArc(comp.index, tuple(seg), ctype, top, top_is_cap, gi == 0, hint))
    return out


# -- elimination ----------------------------------------------------------------------------


def _line_sign(label: str, moving_right: bool) -> int:
    return _arc_sign(label, moving_right)


def eliminate_up_arc(d: MixedDiagram, arc: UpArc, default_label: str = "o") -> MixedDiagram:
    """Cut the up-arc at its top vertex P and pull the two ends to the
    boundary along vertical lines, over (o) or under (u) everything met.

    The upper line runs from the top boundary down to P in P's column. The
    lower line leaves the bottom vertex Q and runs straight down. If the two
    boundary endpoints end up at different indices, the left one is displaced
    rightward next to the boundary.
    """
    tr = _require_valid(d)
    comp = tr.components[arc.component]
    label = arc.crossing_type if arc.crossing_type in LABELS else (arc.hint or default_label)
    pieces = [comp.steps[j] for j in arc.steps]  # bottom first, all going up
    arc_slot = {lv: k for lv, k, _ in pieces}
    top_piece, bottom_piece = pieces[-1], pieces[0]
    R = len(d.rows)

    # rows the arc passes through as a crossing, and its cap/cup rows
    drop: set[int] = set()
    for a, b in zip(pieces, pieces[1:]):
        e = d.rows[b[0]]
        if e.kind == CROSS and a[1] in (e.position - 1, e.position):
            drop.add(b[0])
    cap_row = top_piece[0] - 1 if arc.top_is_cap else None
    cup_row = bottom_piece[0] if arc.bottom_is_cup else None
    if cap_row is not None:
        drop.add(cap_row)
    if cup_row is not None:
        drop.add(cup_row)

    def shifted(r: int, e: MorseEvent) -> int:
        """0-based position of row r's event once the arc slot is removed."""
        p = e.position - 1
        if r not in arc_slot or r + 1 not in arc_slot:
            return p
        return p - 1 if arc_slot[r] < p else p

    # index of the continuing strand at P and of the arriving strand at Q
    # (arc-free indexing); the line attaches there.
    top_level = top_piece[0]
    bot_level = bottom_piece[0]
    if arc.top_is_cap:
        upper_end_level = cap_row
        upper_index = d.rows[cap_row].position - 1
        upper_join = None
    else:
        # cut inside piece at top_level: continuing strand keeps going up; join with a cup
        upper_end_level = top_level
        k = top_piece[1]
        upper_index = k + 1
        upper_join = k
    if arc.bottom_is_cup:
        e = d.rows[cup_row]
        lower_start_level = cup_row + 1
        lower_index = e.position - 1
        lower_join = None
    else:
        lower_start_level = bot_level
        k = bottom_piece[1]
        lower_index = k + 1
        lower_join = k

    # Build the arc-free row list with optional cut rows.
    base: list[tuple[str, MorseEvent | None]] = []
    for r, e in enumerate(d.rows):
        if not arc.top_is_cap and r == upper_end_level:
            base.append(("P", None))
        if not arc.bottom_is_cup and r == lower_start_level:
            base.append(("Q", None))
        if r in drop:
            base.append(("drop", None))
        else:
            p = shifted(r, e)
            base.append(("keep", e.at(p + 1)))
    if not arc.top_is_cap and upper_end_level == R:
        base.append(("P", None))
    if not arc.bottom_is_cup and lower_start_level == R:
        base.append(("Q", None))

    out_top: list[MorseEvent] = []
    out_mid: list[MorseEvent] = []
    out_bot: list[MorseEvent] = []
    # locate markers
    idx_P = next((i for i, (t, _) in enumerate(base) if t == "P"), None)
    idx_Q = next((i for i, (t, _) in enumerate(base) if t == "Q"), None)
    if arc.top_is_cap:
        idx_P = _base_index_of_row(d, base, cap_row)
    if arc.bottom_is_cup:
        idx_Q = _base_index_of_row(d, base, cup_row)

    # upper line: walk upward from just above idx_P with the inverse rules
    line = upper_index
    blocks: list[list[MorseEvent]] = []
    for i in range(idx_P - 1, -1, -1):
        t, e = base[i]
        if t != "keep":
            blocks.append([])
            continue
        evs, line = _lift(e, line, label)
        blocks.append(evs)
    top_line = line
    for evs in reversed(blocks):
        out_top.extend(evs)
    if not arc.top_is_cap:
        # cut point: line arrives just right of the continuing strand; join with a cup
        out_top.append(cup(upper_join + 1))

    for i in range(idx_P + 1, idx_Q):
        t, e = base[i]
        if t == "keep":
            out_mid.append(e)

    line = lower_index
    if not arc.bottom_is_cup:
        out_bot.append(cap(lower_join + 1, None, True))
    for i in range(idx_Q + 1, len(base)):
        t, e = base[i]
        if t != "keep":
            continue
        evs, line = _lower(e, line, label)
        out_bot.extend(evs)
    bottom_line = line

    # align the boundary endpoints of the new pair
    head: list[MorseEvent] = []
    tail: list[MorseEvent] = []
    if top_line < bottom_line:
        # top endpoint sits at bottom_line and moves left to top_line
        for q in range(bottom_line, top_line, -1):
            head.append(cross(q, _line_sign(label, False)))
        new_index = bottom_line
    elif bottom_line < top_line:
        for q in range(bottom_line, top_line):
            tail.append(cross(q + 1, _line_sign(label, True)))
        new_index = top_line
    else:
        new_index = top_line
    boundary = list(d.boundary)
    boundary.insert(new_index, label)
    new = MixedDiagram(d.g, tuple(head + out_top + out_mid + out_bot + tail), tuple(boundary))
    return new


def _base_index_of_row(d: MixedDiagram, base: list, row: int) -> int:
    count = -1
    for i, (t, _) in enumerate(base):
        if t in ("keep", "drop"):
            count += 1
            if count == row:
                return i
    raise DiagramError("internal: row not found")


def _lower(e: MorseEvent, line: int, label: str) -> tuple[list[MorseEvent], int]:
    """Push a downward line (0-based index above the row) through event e."""
    p = e.position - 1
    if e.kind == CROSS:
        if line <= p:
            return [e.at(p + 2)], line
        if line >= p + 2:
            return [e], line
        return [cross(p + 2, _line_sign(label, True)), e], p + 2
    if e.kind == CAP:
        if line <= p:
            return [e.at(p + 2)], line
        return [e], line + 2
    # cup
    if line <= p:
        return [cup(p + 2)], line
    if line >= p + 2:
        return [e], line - 2
    return [cross(p + 2, _line_sign(label, True)), e], p


def _lift(e: MorseEvent, line: int, label: str) -> tuple[list[MorseEvent], int]:
    """Given the line's index below row e, return the events (top to bottom)
    replacing e and the line's index above it."""
    p = e.position - 1
    if e.kind == CROSS:
        if line <= p:
            return [e.at(p + 2)], line
        if line >= p + 2:
            return [e], line
        return [e, cross(p + 2, _line_sign(label, False))], p + 2
    if e.kind == CAP:
        if line <= p:
            return [e.at(p + 2)], line
        if line >= p + 2:
            return [e], line - 2
        return [e.at(p + 2), cross(p + 1, _line_sign(label, True))], p
    if line <= p:
        return [cup(p + 2)], line
    return [e], line + 2


def braid(d: MixedDiagram, default_label: str = "o", max_steps: int | None = None) -> GeometricMixedBraid:
    """Eliminate up-arcs (topmost top vertex first, ties leftmost) until the
    diagram is a braid, then read it off."""
    arcs = find_up_arcs(d)
    limit = max_steps if max_steps is not None else 4 * len(arcs) + 16
    steps = 0
    while arcs:
        if steps >= limit:
            raise DiagramError("braiding did not terminate within the step limit")
        d = eliminate_up_arc(d, arcs[0], default_label)
        steps += 1
        arcs = find_up_arcs(d)
    return read_braid(d)


def read_braid(d: MixedDiagram) -> GeometricMixedBraid:
    _require_valid(d)
    word = []
    for e in d.rows:
        if e.kind != CROSS:
            raise DiagramError("diagram still has caps or cups")
        word.append(e.position * e.sign)
    return GeometricMixedBraid(d.g, tuple(word), d.boundary)


# -- algebraization -----------------------------------------------------------------------


def pull_right(b: GeometricMixedBraid) -> GeometricMixedBraid:
    """Move the moving endpoint pairs to the right of I_g, rightmost first,
    over (o) or under (u) the fixed strands in between."""
    word = list(b.word)
    layout = list(b.layout)
    m = b.strands
    placed = 0
    for c in [c for c, t in enumerate(layout) if t != FIXED][::-1]:
        target = m - 1 - placed
        placed += 1
        if target == c:
            continue
        eps = 1 if layout[c] == "o" else -1
        gens = [eps * k for k in range(c + 1, target + 1)]  # sigma_{c+1} .. sigma_target
        word = [-x for x in reversed(gens)] + word + gens
        tag = layout.pop(c)
        layout.insert(target, tag)
    return GeometricMixedBraid(b.g, tuple(word), tuple(layout))


def _transversal(fixed_mask: Sequence[bool]) -> list[int]:
    """Classical word taking the standard layout F..F M..M to the given one,
    with moving strands passing under fixed strands."""
    g = sum(fixed_mask)
    targets = [j for j, f in enumerate(fixed_mask) if not f]
    word = []
    for i, t in enumerate(targets):
        pos = g + i
        while pos > t:
            word.append(pos)  # sigma_pos: the fixed strand on the left moves right, over
            pos -= 1
    return word


def _loop_candidates(g: int, n: int, j: int, f: int, e: int) -> Iterable[BraidWord]:
    """Words W a_f^e W^-1 for moving strand j looping around fixed strand f,
    with W = s_{j-1}^? ... s_1^? over all sign patterns."""
    for mask in range(2 ** (j - 1)):
        signs = [1 if (mask >> t) & 1 else -1 for t in range(j - 1)]
        w = [(SIGMA, k, s) for k, s in zip(range(j - 1, 0, -1), signs)]
        inv = [(SIGMA, k, -s) for k, s in reversed(list(zip(range(j - 1, 0, -1), signs)))]
        yield BraidWord(g, n, tuple(w + [(HANDLE, f, e)] + inv))


def algebraize(b: GeometricMixedBraid) -> BraidWord:
    """Algebraic mixed braid in a-generators representing b."""
    b = pull_right(b)
    g, n, m = b.g, b.n, b.strands
    mask = [True] * g + [False] * n
    out: list = []
    for x in b.word:
        k, e = abs(x), (1 if x > 0 else -1)
        left, right = k - 1, k
        if not mask[left] and not mask[right]:
            j = sum(1 for t in mask[:left] if not t) + 1
            out.append((SIGMA, j, e))
            continue
        moving_left = not mask[left]
        m_under = (moving_left and e < 0) or (not moving_left and e > 0)
        if not m_under:
            mslot = left if moving_left else right
            j = sum(1 for t in mask[:mslot] if not t) + 1
            f = sum(1 for t in mask[:(right if moving_left else left)] if t) + 1
            T = _transversal(mask)
            target = tuple(T) + (k,) * 2 if e > 0 else tuple(T) + (-k,) * 2
            target = target + tuple(-y for y in reversed(T))
            for cand in _loop_candidates(g, n, j, f, e):
                if garside.classical_equal(embed(cand), target, m):
                    out.extend(cand.letters)
                    break
            else:  # pragma: no cover
                raise DiagramError(f"no loop word found for strand {j} around fixed strand {f}")
        mask[left], mask[right] = mask[right], mask[left]
    return BraidWord(g, n, tuple(out))


# -- isotopy moves ------------------------------------------------------------------------

MOVES = ("R1", "R2", "R3", "planar", "mixed")
OPS = ("insert", "delete", "apply")


@dataclass(frozen=True)
class MoveSite:
    """Where a move acts. ``insert`` puts a kink (R1) or a bigon (R2/mixed)
    between rows at level ``row``, on slot ``slot`` (1-based) with crossing
    sign ``sign``; ``delete`` removes the pattern starting at ``row``;
    ``apply`` performs R3, mixed R3 or a planar swap at ``row``."""

    op: str
    row: int = 0
    slot: int = 1
    sign: int = 1

    def __str__(self) -> str:
        if self.op == "insert":
            return f"insert level={self.row} slot={self.slot} sign={self.sign:+d}"
        return f"{self.op} row={self.row}"


def _fixed_at(tr: Trace, level: int, slot0: int) -> bool:
    return tr.components[tr.owner[(level, slot0)][0]].fixed


def _strand_check(move: str, flags: Sequence[bool]) -> str | None:
    nf = sum(flags)
    if nf > 1:
        return "move would make fixed strands cross"
    if move == "mixed" and nf == 0:
        return "mixed moves involve a fixed strand"
    if move != "mixed" and nf:
        return f"{move} on a fixed strand is a mixed move"
    return None


def _r1_kink(rows: Sequence[MorseEvent], r: int) -> bool:
    if r + 2 >= len(rows):
        return False
    a, b, c = rows[r : r + 3]
    return a.kind == CAP and b.kind == CROSS and c.kind == CUP and a.position == c.position == b.position + 1


def _r2_bigon(rows: Sequence[MorseEvent], r: int) -> bool:
    if r + 1 >= len(rows):
        return False
    a, b = rows[r], rows[r + 1]
    return a.kind == b.kind == CROSS and a.position == b.position and a.sign == -b.sign


def _r3_triangle(rows: Sequence[MorseEvent], r: int) -> bool:
    if r + 2 >= len(rows):
        return False
    a, b, c = rows[r : r + 3]
    return (
        a.kind == b.kind == c.kind == CROSS
        and a.position == c.position
        and abs(a.position - b.position) == 1
        and (a.sign == b.sign or b.sign == c.sign)
    )


def _planar_swap(rows: Sequence[MorseEvent], r: int) -> list[MorseEvent] | None:
    """Exchange rows r and r+1 when they act on disjoint slots."""
    if not 0 <= r < len(rows) - 1:
        return None
    e1, e2 = rows[r], rows[r + 1]
    p1, p2 = e1.position - 1, e2.position - 1
    i1, o1 = e1.arity
    i2, o2 = e2.arity
    if p2 + i2 <= p1:
        n2 = e2
        n1 = e1.at(p1 - i2 + o2 + 1)
    elif p2 >= p1 + o1:
        n2 = e2.at(p2 - o1 + i1 + 1)
        n1 = e1
    else:
        return None
    return list(rows[:r]) + [n2, n1] + list(rows[r + 2 :])


def _site_problem(tr: Trace, move: str, site: MoveSite) -> str | None:
    """None if the move applies at the site, else the reason it does not."""
    rows = tr.diagram.rows
    if move not in MOVES:
        return f"unknown move {move!r}"
    if site.op not in OPS:
        return f"unknown operation {site.op!r}"
    if site.op == "insert":
        if move not in ("R1", "R2", "mixed"):
            return f"{move} has no insert form"
        if site.sign not in (1, -1):
            return "sign must be +1 or -1"
        lv, k = site.row, site.slot - 1
        need = 1 if move == "R1" else 2
        if not 0 <= lv <= len(rows) or not 0 <= k <= tr.widths[lv] - need:
            return "insert site outside the diagram"
        return _strand_check(move, [_fixed_at(tr, lv, k + t) for t in range(need)])
    r = site.row
    if not 0 <= r < len(rows):
        return "row outside the diagram"
    if move == "planar":
        if site.op != "apply":
            return "planar moves use op 'apply'"
        return None if _planar_swap(rows, r) is not None else "rows interact; no planar swap"
    if site.op == "delete":
        if move == "R1":
            return None if _r1_kink(rows, r) else "no R1 kink at this row"
        if move == "R3":
            return "R3 has no delete form"
        if not _r2_bigon(rows, r):
            return "no bigon at this row"
        k = rows[r].position - 1
        return _strand_check(move, [_fixed_at(tr, r, k), _fixed_at(tr, r, k + 1)])
    if move not in ("R3", "mixed"):
        return f"{move} has no apply form"
    if not _r3_triangle(rows, r):
        return "no R3 triangle at this row"
    p = min(rows[r].position, rows[r + 1].position) - 1
    return _strand_check(move, [_fixed_at(tr, r, p + t) for t in range(3)])


def apply_move(d: MixedDiagram, move: str, site: MoveSite) -> MixedDiagram:
    """Apply one isotopy move; raises DiagramError if it does not apply."""
    tr = _require_valid(d)
    problem = _site_problem(tr, move, site)
    if problem:
        raise DiagramError(problem)
    rows = list(d.rows)
    r = site.row
    if site.op == "insert":
        k = site.slot - 1
        if move == "R1":
            ci, j = tr.owner[(r, k)]
            upward = tr.components[ci].steps[j][2] < 0
            new = [cap(k + 2, None, upward), cross(k + 1, site.sign), cup(k + 2)]
        else:
            new = [cross(k + 1, site.sign), cross(k + 1, -site.sign)]
        rows[r:r] = new
    elif site.op == "delete":
        del rows[r : r + (3 if move == "R1" else 2)]
    elif move == "planar":
        rows = _planar_swap(rows, r)
    else:
        a, b, c = rows[r : r + 3]
        rows[r : r + 3] = [cross(b.position, c.sign), cross(a.position, b.sign), cross(b.position, a.sign)]
    return MixedDiagram(d.g, tuple(rows), d.boundary)


def move_sites(d: MixedDiagram) -> list[tuple[str, MoveSite]]:
    """Every applicable (move, site) pair, in a fixed order."""
    tr = _require_valid(d)
    out: list[tuple[str, MoveSite]] = []
    for lv in range(len(d.rows) + 1):
        for k in range(tr.widths[lv]):
            for mv, op in (("R1", "insert"), ("R2", "insert"), ("mixed", "insert")):
                for s in (1, -1):
                    site = MoveSite(op, lv, k + 1, s)
                    if _site_problem(tr, mv, site) is None:
                        out.append((mv, site))
    for r in range(len(d.rows)):
        for mv, op in (
            ("R1", "delete"), ("R2", "delete"), ("mixed", "delete"),
            ("R3", "apply"), ("mixed", "apply"), ("planar", "apply"),
        ):
            site = MoveSite(op, r)
            if _site_problem(tr, mv, site) is None:
                out.append((mv, site))
    return out


def random_move(d: MixedDiagram, rng, weights: dict[str, float] | None = None) -> tuple[MixedDiagram, str, MoveSite]:
    """Apply a uniformly chosen applicable move. Insertions are thinned so the
    diagram does not grow without bound."""
    sites = move_sites(d)
    inserts = [s for s in sites if s[1].op == "insert"]
    others = [s for s in sites if s[1].op != "insert"]
    pool = others if others and rng.random() < 0.6 else inserts
    mv, site = rng.choice(pool)
    return apply_move(d, mv, site), mv, site


def diagram_signature(d: MixedDiagram) -> tuple[int, Counter]:
    """(component count, winding multiset): the quantities every move keeps."""
    prof = diagram_winding(d)
    return len(prof.vectors), Counter(prof.vectors)
