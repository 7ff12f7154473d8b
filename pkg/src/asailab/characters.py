"""Exact character values and smooth characters of local fields.

Character values live in the group of pairs ``(r mod 1, a)`` standing for
``exp(2*pi*i*r) * q_F**a`` with ``q_F = p``.  A ``SmoothChar`` is stored as a
value on the fixed uniformiser plus a function on units; derived characters
(restriction, norm composition, conjugation) compose these functions lazily
and carry an upper bound for their conductor.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import BudgetExceeded, FieldMismatch, NotInTower
from .padic import (
    DEFAULT_BUDGET,
    Embedding,
    FieldElement,
    LocalField,
    inclusion,
    unit_group_enumerate,
)


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True, order=False)
class ExactValue:
    """``e^{2 pi i zeta} * q_F^qexp`` with ``0 <= zeta < 1``."""

    zeta: Fraction = Fraction(0)
    qexp: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "zeta", _frac(self.zeta) % 1)
        object.__setattr__(self, "qexp", _frac(self.qexp))

    def __mul__(self, other: ExactValue) -> ExactValue:
        return ExactValue(self.zeta + other.zeta, self.qexp + other.qexp)

    def __truediv__(self, other: ExactValue) -> ExactValue:
        return self * other.inverse()

    def __pow__(self, n: int) -> ExactValue:
        return ExactValue(self.zeta * n, self.qexp * n)

    def inverse(self) -> ExactValue:
        return ExactValue(-self.zeta, -self.qexp)

    @property
    def is_one(self) -> bool:
        return self.zeta == 0 and self.qexp == 0

    def principal_root(self, f: int) -> ExactValue:
        return ExactValue(self.zeta / f, self.qexp / f)

    def roots(self, f: int) -> list[ExactValue]:
        """All ``f``-th roots, sorted."""
        r = self.principal_root(f)
        return sorted(ExactValue(r.zeta + Fraction(k, f), r.qexp) for k in range(f))

    def sort_key(self):
        return (self.qexp, self.zeta)

    def __lt__(self, other: ExactValue) -> bool:
        return self.sort_key() < other.sort_key()

    def to_json(self) -> dict:
        return {"zeta": str(self.zeta), "qexp": str(self.qexp)}

    @classmethod
    def from_json(cls, d) -> ExactValue:
        if isinstance(d, (list, tuple)):
            return cls(_frac(d[0]), _frac(d[1]))
        return cls(_frac(d.get("zeta", 0)), _frac(d.get("qexp", 0)))

    def __str__(self):
        parts = []
        if self.zeta:
            parts.append(f"e({self.zeta})")
        if self.qexp:
            parts.append(f"q^{self.qexp}")
        return "*".join(parts) or "1"


ONE = ExactValue()


class SmoothChar:
    """A smooth character of ``field^*`` trivial on ``1 + P^level``."""

    def __init__(self, field: LocalField, level: int, uniformizer_value: ExactValue,
                 unit_fn: Callable[[FieldElement], Fraction], label: str = ""):
        self.field = field
        self.level = level
        self.uniformizer_value = uniformizer_value
        self._unit_fn = unit_fn
        self.label = label

    def unit_value(self, u: FieldElement) -> Fraction:
        if self.level == 0:
            return Fraction(0)
        return Fraction(self._unit_fn(u)) % 1

    def __call__(self, x) -> ExactValue:
        x = self.field.coerce(x)
        v, u = self.field.unit_part(x)
        return self.uniformizer_value**v * ExactValue(self.unit_value(u))

    def __repr__(self):
        return (f"<SmoothChar {self.label or '?'} on {self.field.name} "
                f"level={self.level} pi->{self.uniformizer_value}>")

    # construction ---------------------------------------------------------
    @classmethod
    def trivial(cls, field: LocalField) -> SmoothChar:
        return cls(field, 0, ONE, lambda u: 0, "1")

    @classmethod
    def from_params(cls, field: LocalField, level: int, k: int = 0,
                    c=(), uniformizer_value: ExactValue = ONE,
                    label: str = "") -> SmoothChar:
        """Character with ``t -> k/(q-1)`` on the residue generator and
        ``1 + pi*b_j -> c_j/p`` on the level-one units (``level <= 2``)."""
        images = [Fraction(k, field.q - 1)] + [Fraction(cj, field.p) for cj in c]
        images = images[:0 if level == 0 else 1 + (level - 1) * field.f]
        return cls.from_generator_images(field, level, images, uniformizer_value, label)

    @classmethod
    def from_generator_images(cls, field: LocalField, level: int, images,
                              uniformizer_value: ExactValue = ONE,
                              label: str = "") -> SmoothChar:
        """Character given by images of ``field.unit_generators(level)``.

        Supported for ``level <= 2``, where the unit group splits as
        residue units times ``P/P^2``; the relations ``(q-1)*image[0] = 0``
        and ``p*image[j] = 0`` are checked.
        """
        if level > 2:
            raise BudgetExceeded("generator-image characters support level <= 2",
                                 obj=field.name)
        field.check_level(level)
        images = [_frac(x) % 1 for x in images]
        need = 0 if level == 0 else 1 + (level - 1) * field.f
        images = images + [Fraction(0)] * (need - len(images))
        if len(images) != need:
            raise ValueError(f"expected {need} generator images, got {len(images)}")
        if need:
            if (images[0] * (field.q - 1)).denominator != 1:
                raise ValueError("residue generator image must have order dividing q-1")
            if any((x * field.p).denominator != 1 for x in images[1:]):
                raise ValueError("level-one unit images must have order dividing p")
        t_img = images[0] if need else Fraction(0)
        c_img = images[1:]

        def unit_fn(u: FieldElement) -> Fraction:
            val = t_img * field.residue_dlog(u)
            if c_img:
                val += sum(a * y for a, y in zip(c_img, field.u1_vector(u)))
            return val

        return cls(field, level, uniformizer_value, unit_fn, label)

    # group operations -----------------------------------------------------
    def _check(self, other: SmoothChar):
        if other.field is not self.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")

    def __mul__(self, other: SmoothChar) -> SmoothChar:
        self._check(other)
        return SmoothChar(self.field, max(self.level, other.level),
                          self.uniformizer_value * other.uniformizer_value,
                          lambda u: self.unit_value(u) + other.unit_value(u),
                          f"({self.label}*{other.label})")

    def inverse(self) -> SmoothChar:
        return SmoothChar(self.field, self.level, self.uniformizer_value.inverse(),
                          lambda u: -self.unit_value(u), f"{self.label}^-1")

    def __truediv__(self, other: SmoothChar) -> SmoothChar:
        return self * other.inverse()

    def __pow__(self, n: int) -> SmoothChar:
        return SmoothChar(self.field, self.level if n else 0, self.uniformizer_value**n,
                          lambda u: n * self.unit_value(u), f"{self.label}^{n}")

    # comparisons ----------------------------------------------------------
    def _unit_trivial_on(self, elems) -> bool:
        return all(self.unit_value(u) == 0 for u in elems)

    def equals(self, other: SmoothChar) -> bool:
        self._check(other)
        if self.uniformizer_value != other.uniformizer_value:
            return False
        gens = self.field.unit_generators(max(self.level, other.level))
        return all(self.unit_value(g) == other.unit_value(g) for g in gens)

    def is_trivial(self) -> bool:
        return self.uniformizer_value.is_one and self.is_unramified()

    def conductor(self) -> int:
        """Least ``m`` with the character trivial on ``1 + P^m`` (0 if unramified)."""
        n = self.level
        if n == 0:
            return 0
        gens = self.field.unit_generators(n)
        if self._unit_trivial_on(gens):
            return 0
        f = self.field.f
        m = n
        # gens[1 + (i-1)*f : 1 + i*f] are the 1 + pi^i b_j
        while m > 1 and self._unit_trivial_on(gens[1 + (m - 2) * f: 1 + (m - 1) * f]):
            m -= 1
        return m

    def minimized(self) -> SmoothChar:
        m = self.conductor()
        if m == self.level:
            return self
        return SmoothChar(self.field, m, self.uniformizer_value, self._unit_fn, self.label)

    def is_unramified(self) -> bool:
        return self.conductor() == 0

    def unramified_value(self) -> ExactValue | None:
        return self.uniformizer_value if self.is_unramified() else None

    def verify(self, budget: int = DEFAULT_BUDGET) -> bool:
        """Brute-force homomorphism check on ``(R/P^level)^*``."""
        if self.level == 0:
            return True
        G = unit_group_enumerate(self.field, self.level, budget)
        gens = G.generators()
        gvals = [self.unit_value(g) for g in gens]
        for x in G:
            vx = self.unit_value(x)
            for g, vg in zip(gens, gvals):
                if (self.unit_value(G.mul(x, g)) - vx - vg) % 1:
                    return False
        return True


def trivial_char(field: LocalField) -> SmoothChar:
    return SmoothChar.trivial(field)


def char_mul(chi: SmoothChar, psi: SmoothChar) -> SmoothChar:
    return chi * psi


def char_inv(chi: SmoothChar) -> SmoothChar:
    return chi.inverse()


def char_pow(chi: SmoothChar, n: int) -> SmoothChar:
    return chi**n


def _as_embedding(sub, field: LocalField) -> Embedding:
    if isinstance(sub, Embedding):
        if sub.target is not field:
            raise NotInTower(f"embedding does not land in {field.name}")
        return sub
    return inclusion(sub, field)


def restrict(chi: SmoothChar, sub) -> SmoothChar:
    """``chi`` composed with an embedding (or tower inclusion) of a subfield."""
    emb = _as_embedding(sub, chi.field)
    E1 = emb.source
    e = chi.field.e // E1.e
    level = -(-chi.level // e)
    return SmoothChar(E1, level, chi(emb(E1.uniformizer)),
                      lambda u: chi.unit_value(emb(u)), f"{chi.label}|{E1.name}")


def compose_norm(chi: SmoothChar, field: LocalField,
                 norm: Callable[[FieldElement], FieldElement] | None = None) -> SmoothChar:
    """``chi o N_{field/chi.field}``; ``norm`` overrides the tower norm."""
    sub = chi.field
    if norm is None:
        if sub not in field.ancestors:
            raise NotInTower(f"{sub.name} is not below {field.name}")

        def norm(x):
            return field.norm_to(x, sub)
    e = field.e // sub.e
    level = 0 if chi.level == 0 else e * (chi.level - 1) + 1
    return SmoothChar(field, level, chi(norm(field.uniformizer)),
                      lambda u: chi.unit_value(norm(u)), f"{chi.label}oN")


def conj(chi: SmoothChar, g: Embedding) -> SmoothChar:
    """``chi o g`` for an automorphism ``g`` of ``chi.field``."""
    if g.source is not chi.field or g.target is not chi.field:
        raise NotInTower("automorphism does not act on the character's field")
    return SmoothChar(chi.field, chi.level, chi(g(chi.field.uniformizer)),
                      lambda u: chi.unit_value(g(u)), f"{chi.label}^g")


def is_unramified(chi: SmoothChar) -> bool:
    return chi.is_unramified()


def unramified_value(chi: SmoothChar) -> ExactValue | None:
    return chi.unramified_value()


def is_regular(omega: SmoothChar, sigma: Embedding) -> bool:
    """True iff ``omega != omega o sigma``."""
    return not omega.equals(conj(omega, sigma))


def eta_char(ext: LocalField) -> SmoothChar:
    """Quadratic character of ``ext.parent^*`` with kernel the norms from ``ext``."""
    E = ext.parent
    d = ext.d_raw

    def hv(x):
        return Fraction(0) if E.hilbert_symbol(x, d) == 1 else Fraction(1, 2)

    level = 1 if ext.ramified else 0
    return SmoothChar(E, level, ExactValue(hv(E.uniformizer)), hv,
                      f"eta[{ext.name}/{E.name}]")


def absvalue_char(field: LocalField, a) -> SmoothChar:
    """``|x|_field^a`` for rational ``a``."""
    a = _frac(a)
    return SmoothChar(field, 0, ExactValue(0, -a * field.f), lambda u: 0, f"|.|^{a}")


def descend_through_norm(chi: SmoothChar, sub: Embedding,
                         tau: Embedding) -> list[SmoothChar] | None:
    """Characters ``mu`` of ``sub.source`` with ``mu o N = chi``.

    ``sub`` embeds a field B into ``chi.field`` = M with ``[M:B] = 2`` and
    ``tau`` generates Gal(M/B).  Returns both solutions (they differ by the
    quadratic character of M/B), or None when ``chi`` is non-trivial on the
    kernel of the norm.  Solutions are searched at level <= 2.
    """
    M, B = chi.field, sub.source
    if tau.source is not M or tau.target is not M:
        raise NotInTower("tau must be an automorphism of the character's field")

    def norm(x):
        return sub.preimage(x * tau(x))

    e = M.e // B.e
    level = max(chi.level, e + 1)
    gens = M.unit_generators(level)
    for x in gens + [M.uniformizer]:
        if not chi(x / tau(x)).is_one:
            return None

    constraints = []
    for x in gens:
        nx = norm(x)
        constraints.append((B.residue_dlog(nx), B.u1_vector(nx), chi.unit_value(x)))
    q, p, f = B.q, B.p, B.f
    unit_solutions = []
    for k in range(q - 1):
        for cvec in _vectors(p, f):
            if all((Fraction(k * dl, q - 1) + Fraction(sum(a * b for a, b in zip(cvec, y)), p)
                    - target) % 1 == 0 for dl, y, target in constraints):
                unit_solutions.append((k, cvec))
    npi = norm(M.uniformizer)
    v, u0 = B.unit_part(npi)
    out = []
    for k, cvec in unit_solutions:
        mu0 = SmoothChar.from_params(B, 2, k, cvec)
        rest = chi(M.uniformizer) / ExactValue(mu0.unit_value(u0))
        for z in rest.roots(v):
            mu = SmoothChar.from_params(B, 2, k, cvec, z, label=f"desc({chi.label})")
            out.append(mu.minimized())
    if not out:
        raise BudgetExceeded("descent needs a character of level > 2", obj=B.name)
    return out


def _vectors(p: int, f: int):
    if f == 0:
        yield ()
        return
    for head in range(p):
        for tail in _vectors(p, f - 1):
            yield (head,) + tail
