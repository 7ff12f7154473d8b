"""Euler factors ``1/prod(1 - alpha X)``, ``X = q_F^{-s}``, as root multisets."""
from __future__ import annotations

import json
from collections import Counter
from fractions import Fraction

from .characters import ExactValue, SmoothChar


class EulerFactor:
    __slots__ = ("_roots",)

    def __init__(self, inverse_roots=()):
        self._roots = Counter(inverse_roots)

    @property
    def inverse_roots(self) -> list[ExactValue]:
        return sorted(self._roots.elements())

    def multiplicity(self, alpha: ExactValue) -> int:
        return self._roots[alpha]

    def degree(self) -> int:
        return sum(self._roots.values())

    def __mul__(self, other: EulerFactor) -> EulerFactor:
        return EulerFactor((self._roots + other._roots).elements())

    def __pow__(self, n: int) -> EulerFactor:
        return EulerFactor(list(self._roots.elements()) * n)

    def __or__(self, other: EulerFactor) -> EulerFactor:
        return EulerFactor((self._roots | other._roots).elements())

    def __and__(self, other: EulerFactor) -> EulerFactor:
        return EulerFactor((self._roots & other._roots).elements())

    def divides(self, other: EulerFactor) -> bool:
        return all(other._roots[a] >= m for a, m in self._roots.items())

    def __eq__(self, other):
        if not isinstance(other, EulerFactor):
            return NotImplemented
        return +self._roots == +other._roots

    def __hash__(self):
        return hash(tuple(self.inverse_roots))

    def poles(self) -> list[ExactValue]:
        return self.inverse_roots

    def has_simple_poles(self) -> bool:
        return all(m == 1 for m in self._roots.values())

    def to_json(self) -> list[dict]:
        return [a.to_json() for a in self.inverse_roots]

    @classmethod
    def from_json(cls, data) -> EulerFactor:
        return cls(ExactValue.from_json(d) for d in data)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def __str__(self):
        if not self._roots:
            return "1"
        terms = []
        for a in self.inverse_roots:
            coeff = []
            if a.zeta:
                coeff.append(f"e({a.zeta})")
            if a.qexp:
                coeff.append(f"q^{a.qexp}")
            terms.append(f"(1 - {'*'.join(coeff + ['X'])})")
        return "1/" + "".join(terms)

    __repr__ = __str__


UNIT = EulerFactor()


def ef_mul(a: EulerFactor, b: EulerFactor) -> EulerFactor:
    return a * b


def ef_divides(a: EulerFactor, b: EulerFactor) -> bool:
    return a.divides(b)


def ef_lcm(a: EulerFactor, b: EulerFactor) -> EulerFactor:
    return a | b


def ef_gcd(a: EulerFactor, b: EulerFactor) -> EulerFactor:
    return a & b


def poles(L: EulerFactor) -> list[ExactValue]:
    return L.poles()


def tate_lfactor(chi: SmoothChar, shift=0) -> EulerFactor:
    """``L(chi, s + shift)`` expanded in ``X = q_F^{-s}``.

    For unramified ``chi`` on a field of residue degree ``f`` this is
    ``1/(1 - chi(pi) q_E^{-shift} X^f)``, split into ``f`` linear factors.
    """
    if not chi.is_unramified():
        return UNIT
    f = chi.field.f
    beta = chi.uniformizer_value * ExactValue(0, -Fraction(shift) * f)
    return EulerFactor(beta.roots(f))
