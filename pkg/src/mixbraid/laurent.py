"""Exact multivariate Laurent polynomials with integer coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class Laurent:
    """sum(coeff * prod(var_j ** exps[j])) over a fixed tuple of variable names."""

    variables: tuple[str, ...]
    terms: tuple[tuple[Exponents, int], ...] = ()

    @classmethod
    def from_dict(cls, variables: tuple[str, ...], terms: Mapping[Exponents, int]) -> Laurent:
        for e in terms:
            if len(e) != len(variables):
                raise ValueError(f"exponent vector {e} does not match {variables}")
        clean = tuple(sorted(((e, c) for e, c in terms.items() if c), reverse=True))
        return cls(variables, clean)

    @classmethod
    def constant(cls, variables: tuple[str, ...], c: int = 1) -> Laurent:
        return cls.from_dict(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables: tuple[str, ...], exps: Exponents, c: int = 1) -> Laurent:
        return cls.from_dict(variables, {tuple(exps): c})

    @classmethod
    def var(cls, variables: tuple[str, ...], name: str) -> Laurent:
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls.monomial(variables, tuple(e))

    def as_dict(self) -> dict[Exponents, int]:
        return dict(self.terms)

    def _check(self, other: Laurent) -> None:
        if self.variables != other.variables:
            raise ValueError(f"ring mismatch {self.variables} vs {other.variables}")

    def __add__(self, other: Laurent) -> Laurent:
        self._check(other)
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return Laurent.from_dict(self.variables, d)

    def __neg__(self) -> Laurent:
        return Laurent(self.variables, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: Laurent) -> Laurent:
        return self + (-other)

    def __mul__(self, other: Laurent | int) -> Laurent:
        if isinstance(other, int):
            return Laurent.from_dict(self.variables, {e: c * other for e, c in self.terms})
        self._check(other)
        d: dict[Exponents, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return Laurent.from_dict(self.variables, d)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and abs(self.terms[0][1]) == 1

    def __pow__(self, k: int) -> Laurent:
        if k < 0:
            if not self.is_unit():
                raise ValueError("only monomial units can be inverted")
            (e, c), = self.terms
            return Laurent.monomial(self.variables, tuple(-x for x in e), c) ** -k
        out = Laurent.constant(self.variables)
        for _ in range(k):
            out = out * self
        return out

    def is_one(self) -> bool:
        return self.terms == (((0,) * len(self.variables), 1),)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            factors = []
            for name, x in zip(self.variables, e):
                if x == 1:
                    factors.append(name)
                elif x:
                    factors.append(f"{name}^{x}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)
