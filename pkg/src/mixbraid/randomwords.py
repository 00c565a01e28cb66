"""Random words and relators for fuzzing."""

from __future__ import annotations

import random

from .words import HANDLE, LOOP, SIGMA, BraidWord, Letter


def random_letters(g: int, n: int, length: int, rng: random.Random, family: str = HANDLE) -> list[Letter]:
    pool = [(SIGMA, i) for i in range(1, n)] + [(family, i) for i in range(1, g + 1)]
    if not pool:
        return []
    return [(*rng.choice(pool), rng.choice((1, -1))) for _ in range(length)]


def random_word(g: int, n: int, length: int, rng: random.Random, family: str = HANDLE) -> BraidWord:
    return BraidWord(g, n, tuple(random_letters(g, n, length, rng, family)))


def relators(g: int, n: int, family: str = HANDLE) -> list[tuple[tuple[Letter, ...], tuple[Letter, ...]]]:
    """Both sides of every defining relation of B_{g,n} in the given generators."""
    s = lambda k, e=1: (SIGMA, k, e)  # noqa: E731
    x = lambda i, e=1: (family, i, e)  # noqa: E731
    rels = []
    for k in range(1, n):
        for j in range(k + 2, n):
            rels.append(((s(k), s(j)), (s(j), s(k))))
        if k + 1 <= n - 1:
            rels.append(((s(k), s(k + 1), s(k)), (s(k + 1), s(k), s(k + 1))))
    for i in range(1, g + 1):
        for k in range(2, n):
            rels.append(((x(i), s(k)), (s(k), x(i))))
    if n >= 2:
        for i in range(1, g + 1):
            if family == HANDLE:
                rels.append(((x(i), s(1), x(i), s(1)), (s(1), x(i), s(1), x(i))))
                for r in range(1, i):
                    conj = (s(1), x(r), s(1, -1))
                    rels.append(((x(i),) + conj, conj + (x(i),)))
            elif family == LOOP:
                for r in range(1, i + 1):
                    rels.append(((x(i), s(1), x(r), s(1)), (s(1), x(r), s(1), x(i))))
    return rels
