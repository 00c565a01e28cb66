"""
Markov functionals on mixed braids and the link invariants they induce.

A Markov functional mu on the group rings of B_{g,n} (all n) comes with units
x and lam in its ring and must satisfy

    (1) mu(1) = 1
    (2) x mu(beta) = mu(iota(beta))
    (3) mu(beta s_i^+-1) = mu(s_i^+-1 beta)
    (4) mu(beta_1 s_n^+-1 beta_2) = lam^+-1 mu(iota(beta_1 beta_2))

where iota adds an idle strand on the right. Axiom (4) is read with both sides
in B_{g,n+1}; under that reading the normalised value

    x^(-(n-1)) lam^(-e(beta)) mu(beta)

is unchanged by every Markov move (``NORMALISATION_SIGN`` below).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .laurent import Laurent
from .moves import stabilize
from .words import (
    HANDLE,
    SIGMA,
    BraidWord,
    a_exponent_vector,
    exponent_sum,
    permutation_cycles,
    to_a,
    underlying_permutation,
)

# Exponent of x in the normalisation is NORMALISATION_SIGN * (n - 1).
NORMALISATION_SIGN = -1


def ring_variables(g: int) -> tuple[str, ...]:
    return tuple(f"t{i}" for i in range(1, g + 1)) + ("x", "lambda")


def iota(u: BraidWord) -> BraidWord:
    """Add an unlinked strand on the right."""
    return BraidWord(u.g, u.n + 1, u.letters)


@dataclass(frozen=True)
class FunctionalSpec:
    name: str
    g: int
    evaluate: Callable[[BraidWord], Laurent]
    x: Laurent
    lam: Laurent

    def __post_init__(self) -> None:
        if not (self.x.is_unit() and self.lam.is_unit()):
            raise ValueError("x and lambda must be units of the ring")

    @property
    def variables(self) -> tuple[str, ...]:
        return ring_variables(self.g)

    def __call__(self, u: BraidWord) -> Laurent:
        return self.evaluate(u)

    def evaluate_sum(self, combination: Mapping[BraidWord, int]) -> Laurent:
        """Linear extension to formal integer combinations of braids."""
        total = Laurent.constant(self.variables, 0)
        for u, c in combination.items():
            total = total + self.evaluate(u) * c
        return total


def _homology_value(u: BraidWord) -> Laurent:
    vec = a_exponent_vector(to_a(u))
    return Laurent.monomial(ring_variables(u.g), vec + (0, 0))


def homology_functional(g: int) -> FunctionalSpec:
    """mu_H(beta) = prod t_i^{w_i(beta)}, w the handle exponent vector; x = lam = 1."""
    if g < 1:
        raise ValueError("homology functional needs g >= 1")
    one = Laurent.constant(ring_variables(g))
    return FunctionalSpec("homology", g, _homology_value, one, one)


def scaled_homology_functional(g: int) -> FunctionalSpec:
    """x^(n-1) lam^e(beta) mu_H(beta) with x and lam kept as formal units."""
    variables = ring_variables(g)
    x = Laurent.var(variables, "x")
    lam = Laurent.var(variables, "lambda")

    def value(u: BraidWord) -> Laurent:
        return x ** (u.n - 1) * lam ** exponent_sum(u) * _homology_value(u)

    return FunctionalSpec("scaled-homology", g, value, x, lam)


def broken_lambda_functional(g: int) -> FunctionalSpec:
    """Negative control: the scaled functional with lambda declared as its
    inverse. Only the stabilization axiom can notice."""
    good = scaled_homology_functional(g)
    return FunctionalSpec("broken-lambda", g, good.evaluate, good.x, good.lam ** -1)


FUNCTIONALS = {
    "homology": homology_functional,
    "scaled-homology": scaled_homology_functional,
    "broken-lambda": broken_lambda_functional,
}


def link_invariant(u: BraidWord, f: FunctionalSpec) -> Laurent:
    """x^(s(n-1)) lam^(-e) mu(u) with s = NORMALISATION_SIGN."""
    e = exponent_sum(u)
    return f.x ** (NORMALISATION_SIGN * (u.n - 1)) * f.lam ** (-e) * f.evaluate(u)


# -- axiom checking -----------------------------------------------------------------


@dataclass
class AxiomResult:
    axiom: int
    sample: str
    passed: bool
    lhs: str
    rhs: str


@dataclass
class AxiomReport:
    functional: str
    results: list[AxiomResult] = field(default_factory=list)

    def passed(self, axiom: int | None = None) -> bool:
        return all(r.passed for r in self.results if axiom is None or r.axiom == axiom)

    def failed_axioms(self) -> set[int]:
        return {r.axiom for r in self.results if not r.passed}

    def counts(self) -> dict[int, tuple[int, int]]:
        out: dict[int, tuple[int, int]] = {}
        for r in self.results:
            ok, total = out.get(r.axiom, (0, 0))
            out[r.axiom] = (ok + r.passed, total + 1)
        return out


def check_axioms(f: FunctionalSpec, samples: Sequence[BraidWord]) -> AxiomReport:
    """Check axioms (1)-(4) on every sample, every sigma index and every split."""
    report = AxiomReport(f.name)

    def record(axiom: int, sample: BraidWord, lhs: Laurent, rhs: Laurent) -> None:
        report.results.append(AxiomResult(axiom, str(sample), lhs == rhs, str(lhs), str(rhs)))

    one = BraidWord(f.g, 1)
    record(1, one, f(one), Laurent.constant(f.variables))
    for beta in samples:
        record(2, beta, f.x * f(beta), f(iota(beta)))
        for i in range(1, beta.n):
            for s in (1, -1):
                right = BraidWord(beta.g, beta.n, beta.letters + ((SIGMA, i, s),))
                left = BraidWord(beta.g, beta.n, ((SIGMA, i, s),) + beta.letters)
                record(3, beta, f(right), f(left))
        for split in range(len(beta) + 1):
            for s in (1, -1):
                record(4, beta, f(stabilize(beta, split, s)), f.lam ** s * f(iota(beta)))
    return report


# -- winding data -------------------------------------------------------------------


@dataclass(frozen=True)
class WindingProfile:
    """Per closure component: the total handle exponent vector.

    Only the multiset of vectors takes part in comparisons; component lengths
    (strand counts) change under stabilization and are kept for display.
    """

    vectors: tuple[tuple[int, ...], ...]
    lengths: tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def from_components(cls, comps: Iterable[tuple[int, tuple[int, ...]]]) -> WindingProfile:
        comps = sorted(comps, key=lambda c: (c[1], c[0]))
        return cls(tuple(v for _, v in comps), tuple(l for l, _ in comps))

    def components(self) -> list[tuple[int, tuple[int, ...]]]:
        return list(zip(self.lengths, self.vectors))

    def __str__(self) -> str:
        inner = ", ".join(f"({l}, {tuple(v)})" for l, v in self.components())
        return "{" + inner + "}"


def winding_profile(u: BraidWord) -> WindingProfile:
    """Each a_i letter adds e_i to the strand at moving position 1; vectors are
    summed around each cycle of the closure permutation."""
    u = to_a(u)
    at = list(range(u.n))  # at[pos] = strand (by top position)
    acc = [[0] * u.g for _ in range(u.n)]
    for kind, i, e in u.letters:
        if kind == HANDLE:
            acc[at[0]][i - 1] += e
        elif e % 2:
            at[i - 1], at[i] = at[i], at[i - 1]
    comps = []
    for cyc in permutation_cycles(underlying_permutation(u)):
        vec = [0] * u.g
        for p in cyc:
            for j, x in enumerate(acc[p - 1]):
                vec[j] += x
        comps.append((len(cyc), tuple(vec)))
    return WindingProfile.from_components(comps)


def component_count(u: BraidWord) -> int:
    return len(permutation_cycles(underlying_permutation(u)))


def random_samples(g: int, max_n: int, count: int, max_len: int, rng: random.Random) -> list[BraidWord]:
    from .randomwords import random_word

    return [random_word(g, rng.randint(1, max_n), rng.randint(0, max_len), rng) for _ in range(count)]
