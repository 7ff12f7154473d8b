"""Quadratic towers over Q_p (p odd) with exact coordinates.

An element of ``E = P(sqrt d)`` is stored as a nested pair ``(a, b)`` of raw
elements of ``P`` meaning ``a + b*g`` where ``g**2 = d``; the base field holds
``int`` or ``Fraction`` values.  ``d`` is normalised at construction to be a
unit non-square (unramified step) or a uniformiser times a unit (ramified
step), so ``{1, g}`` is an integral basis at every layer.  Ideals, residues
and unit groups are then read coordinate-wise.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import (
    BudgetExceeded,
    DivisionByZero,
    IsSquare,
    NotInTower,
    PrecisionExhausted,
)

INF = math.inf
DEFAULT_BUDGET = 200_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def vp(x, p: int):
    """p-adic valuation of an int or Fraction (``inf`` for zero)."""
    if x == 0:
        return INF
    x = Fraction(x)
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def mod_pk(x, p: int, k: int) -> int:
    if k <= 0:
        return 0
    m = p**k
    if isinstance(x, int):
        return x % m
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not p-integral")
    return x.numerator * pow(x.denominator, -1, m) % m


@dataclass(frozen=True)
class PrimeContext:
    p: int
    precision: int = 6

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.precision < 2:
            raise ValueError("precision must be at least 2")


@dataclass(frozen=True)
class SquareClass:
    parity: int
    residue_is_square: bool

    @property
    def trivial(self) -> bool:
        return self.parity == 0 and self.residue_is_square

    def __mul__(self, other: SquareClass) -> SquareClass:
        return SquareClass(
            (self.parity + other.parity) % 2,
            self.residue_is_square == other.residue_is_square,
        )

    def sort_key(self):
        return (self.parity, not self.residue_is_square)


class FieldElement:
    __slots__ = ("field", "raw")

    def __init__(self, field: LocalField, raw):
        self.field = field
        self.raw = raw

    def _other(self, y):
        if isinstance(y, FieldElement):
            if y.field is self.field:
                return y.raw
            return self.field.coerce(y).raw
        return self.field.coerce(y).raw

    def __add__(self, y):
        return FieldElement(self.field, self.field._add(self.raw, self._other(y)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.raw))

    def __sub__(self, y):
        return self + (-self.field.coerce(y))

    def __rsub__(self, y):
        return self.field.coerce(y) - self

    def __mul__(self, y):
        return FieldElement(self.field, self.field._mul(self.raw, self._other(y)))

    __rmul__ = __mul__

    def inverse(self):
        return FieldElement(self.field, self.field._inv(self.raw))

    def __truediv__(self, y):
        return self * self.field.coerce(y).inverse()

    def __rtruediv__(self, y):
        return self.field.coerce(y) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, y):
        if not isinstance(y, (FieldElement, int, Fraction)):
            return NotImplemented
        try:
            other = self._other(y)
        except NotInTower:
            return False
        return self.field._is_zero(self.field._sub(self.raw, other))

    def __hash__(self):
        return hash(tuple(self.field._flatten(self.raw)))

    def is_zero(self) -> bool:
        return self.field._is_zero(self.raw)

    def valuation(self):
        """Normalised valuation in the element's own field."""
        if self.is_zero():
            raise PrecisionExhausted("valuation of zero", obj=self.field.name)
        return self.field._val(self.raw)

    def conj(self):
        """Image under the defining involution of ``field`` over its parent."""
        return FieldElement(self.field, self.field._conj(self.raw))

    def coords(self) -> list:
        return self.field._flatten(self.raw)

    def __repr__(self):
        return f"{self.field.name}{tuple(str(c) for c in self.coords())}"


class LocalField:
    """A node in a tower of quadratic extensions of Q_p."""

    def __init__(self, context: PrimeContext, parent: LocalField | None = None,
                 d: FieldElement | None = None, sqrt_shift: int = 0,
                 d_raw: FieldElement | None = None, name: str | None = None):
        self.context = context
        self.p = context.p
        self.parent = parent
        self.d = d
        self.d_raw = d_raw
        self.sqrt_shift = sqrt_shift
        if parent is None:
            self.depth = 0
            self.e = self.f = 1
            self.ramified = False
            self.name = name or f"Q{self.p}"
        else:
            self.depth = parent.depth + 1
            self.ramified = d.valuation() % 2 == 1
            self.e = parent.e * (2 if self.ramified else 1)
            self.f = parent.f * (1 if self.ramified else 2)
            self.name = name or f"{parent.name}(sqrt{d_raw.coords()})"
        self.degree = 2**self.depth
        self.q = self.p**self.f

    # raw arithmetic -------------------------------------------------------
    def _zero(self):
        return 0 if self.parent is None else (self.parent._zero(), self.parent._zero())

    def _one(self):
        return 1 if self.parent is None else (self.parent._one(), self.parent._zero())

    def _add(self, x, y):
        if self.parent is None:
            return x + y
        P = self.parent
        return (P._add(x[0], y[0]), P._add(x[1], y[1]))

    def _neg(self, x):
        if self.parent is None:
            return -x
        return (self.parent._neg(x[0]), self.parent._neg(x[1]))

    def _sub(self, x, y):
        return self._add(x, self._neg(y))

    def _mul(self, x, y):
        if self.parent is None:
            return x * y
        P = self.parent
        a, b = x
        c, e = y
        bd = P._mul(P._mul(b, e), self.d.raw)
        return (P._add(P._mul(a, c), bd), P._add(P._mul(a, e), P._mul(b, c)))

    def _conj(self, x):
        if self.parent is None:
            return x
        return (x[0], self.parent._neg(x[1]))

    def _norm_parent(self, x):
        P = self.parent
        a, b = x
        return P._sub(P._mul(a, a), P._mul(P._mul(b, b), self.d.raw))

    def _inv(self, x):
        if self._is_zero(x):
            raise DivisionByZero("inverse of zero", obj=self.name)
        if self.parent is None:
            return Fraction(1) / x
        P = self.parent
        ninv = P._inv(self._norm_parent(x))
        return (P._mul(x[0], ninv), P._neg(P._mul(x[1], ninv)))

    def _is_zero(self, x) -> bool:
        if self.parent is None:
            return x == 0
        return self.parent._is_zero(x[0]) and self.parent._is_zero(x[1])

    def _val(self, x):
        if self.parent is None:
            return vp(x, self.p)
        P = self.parent
        va, vb = P._val(x[0]), P._val(x[1])
        if self.ramified:
            return min(2 * va, 2 * vb + 1)
        return min(va, vb)

    def _flatten(self, x) -> list:
        if self.parent is None:
            return [x]
        return self.parent._flatten(x[0]) + self.parent._flatten(x[1])

    def _unflatten(self, it):
        if self.parent is None:
            return next(it)
        a = self.parent._unflatten(it)
        b = self.parent._unflatten(it)
        return (a, b)

    def _moduli(self, n: int):
        """Nested p-exponents ``m`` with ``P_E^n`` = coordinates in ``p^m``."""
        if self.parent is None:
            return max(n, 0)
        P = self.parent
        if self.ramified:
            return (P._moduli(-(-n // 2)), P._moduli(n // 2))
        return (P._moduli(n), P._moduli(n))

    def _reduce(self, x, n: int):
        if self.parent is None:
            return mod_pk(x, self.p, n)
        P = self.parent
        if self.ramified:
            return (P._reduce(x[0], -(-n // 2)), P._reduce(x[1], n // 2))
        return (P._reduce(x[0], n), P._reduce(x[1], n))

    # element constructors -------------------------------------------------
    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, self._zero())

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, self._one())

    @cached_property
    def gen(self) -> FieldElement:
        """The adjoined square root of the normalised ``d``."""
        if self.parent is None:
            raise NotInTower("base field has no generator", obj=self.name)
        P = self.parent
        return FieldElement(self, (P._zero(), P._one()))

    @cached_property
    def sqrt_raw(self) -> FieldElement:
        """An element whose square is the ``d`` given at construction."""
        return self.lift(self.parent.uniformizer) ** self.sqrt_shift * self.gen

    @cached_property
    def uniformizer(self) -> FieldElement:
        if self.parent is None:
            return FieldElement(self, self.p)
        if self.ramified:
            return self.gen
        return self.lift(self.parent.uniformizer)

    @cached_property
    def ancestors(self) -> list[LocalField]:
        """Chain from the base field up to and including ``self``."""
        chain = [] if self.parent is None else self.parent.ancestors
        return chain + [self]

    @property
    def base(self) -> LocalField:
        return self.ancestors[0]

    def from_flat(self, coords) -> FieldElement:
        coords = list(coords)
        if len(coords) != self.degree:
            raise ValueError("wrong number of coordinates")
        return FieldElement(self, self._unflatten(iter(coords)))

    def from_parent(self, x: FieldElement) -> FieldElement:
        return FieldElement(self, (x.raw, self.parent._zero()))

    def lift(self, x: FieldElement) -> FieldElement:
        """Embed an element of an ancestor field."""
        if x.field is self:
            return x
        if x.field not in self.ancestors:
            raise NotInTower(f"{x.field.name} is not below {self.name}")
        return self.from_parent(self.parent.lift(x))

    def coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            return self.lift(x)
        if isinstance(x, (int, Fraction)):
            return self.lift(FieldElement(self.base, x))
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    __call__ = coerce

    def norm_to(self, x: FieldElement, sub: LocalField) -> FieldElement:
        """Norm from ``self`` down to an ancestor ``sub``."""
        if sub not in self.ancestors:
            raise NotInTower(f"{sub.name} is not an ancestor of {self.name}")
        field, raw = self, x.raw
        while field is not sub:
            raw = field._norm_parent(raw)
            field = field.parent
        return FieldElement(sub, raw)

    # residues and unit groups ----------------------------------------------
    def check_level(self, n: int):
        if n > self.context.precision:
            raise PrecisionExhausted(
                f"level {n} exceeds working precision {self.context.precision}",
                obj=self.name)

    def reduce(self, x: FieldElement, n: int) -> FieldElement:
        """Canonical representative of an integral ``x`` modulo ``P^n``."""
        try:
            return FieldElement(self, self._reduce(x.raw, n))
        except ValueError:
            raise ValueError(f"{x} is not integral in {self.name}") from None

    def key(self, x: FieldElement, n: int) -> tuple:
        return tuple(self._flatten(self._reduce(x.raw, n)))

    def ring_elements(self, n: int):
        """All canonical representatives of ``R/P^n``."""
        exps = self._flatten(self._moduli(n))
        for coords in itertools.product(*(range(self.p**m) for m in exps)):
            yield FieldElement(self, self._unflatten(iter(coords)))

    @cached_property
    def _residue_positions(self) -> list[int]:
        return [i for i, m in enumerate(self._flatten(self._moduli(1))) if m]

    def residue_vector(self, x: FieldElement) -> tuple[int, ...]:
        """Residue of an integral ``x`` as a vector in F_p^f."""
        flat = self.key(x, 1)
        return tuple(flat[i] for i in self._residue_positions)

    def residue_basis(self) -> list[FieldElement]:
        out = []
        for i in self._residue_positions:
            coords = [0] * self.degree
            coords[i] = 1
            out.append(self.from_flat(coords))
        return out

    @cached_property
    def _residue_log(self):
        """(generator, dlog table) for the residue field multiplicative group."""
        q = self.q
        factors = prime_factors(q - 1)
        one = self.residue_vector(self.one)
        for g in self.ring_elements(1):
            if not any(self.residue_vector(g)):
                continue
            if all(self.residue_vector(self.pow_mod(g, (q - 1) // r, 1)) != one
                   for r in factors):
                break
        table = {}
        x = self.one
        for k in range(q - 1):
            table[self.residue_vector(x)] = k
            x = self.reduce(x * g, 1)
        assert len(table) == q - 1
        return g, table

    @property
    def residue_generator(self) -> FieldElement:
        return self._residue_log[0]

    def residue_dlog(self, u: FieldElement) -> int:
        """Discrete log of the residue of the unit ``u``."""
        try:
            return self._residue_log[1][self.residue_vector(u)]
        except KeyError:
            raise PrecisionExhausted(f"{u} is not a unit", obj=self.name) from None

    def pow_mod(self, x: FieldElement, e: int, n: int) -> FieldElement:
        """``x**e`` modulo ``P^n`` for integral ``x`` and ``e >= 0``."""
        acc, w = self.one, self.reduce(x, n)
        while e:
            if e & 1:
                acc = self.reduce(acc * w, n)
            w = self.reduce(w * w, n)
            e >>= 1
        return acc

    def unit_part(self, x: FieldElement) -> tuple[int, FieldElement]:
        v = x.valuation()
        return v, x * self.uniformizer ** (-v)

    def u1_vector(self, u: FieldElement) -> tuple[int, ...]:
        """Homomorphism U -> P/P^2 = F_p^f, ``1 + pi*z`` maps to ``z mod P``."""
        acc = self.pow_mod(u, self.q - 1, 2)
        z = (self.one - acc) / self.uniformizer
        return self.residue_vector(z)

    @cached_property
    def teichmuller_generator(self) -> FieldElement:
        """Order-(q-1) lift of the residue generator modulo ``P^2``."""
        return self.pow_mod(self.residue_generator, self.q, 2)

    def unit_generators(self, n: int) -> list[FieldElement]:
        """Generators of ``(R/P^n)^*``: a residue generator and ``1 + pi^i b_j``."""
        if n <= 0:
            return []
        gens = [self.teichmuller_generator]
        for i in range(1, n):
            pi_i = self.uniformizer**i
            gens.extend(self.one + pi_i * b for b in self.residue_basis())
        return gens

    def is_square_residue(self, u: FieldElement) -> bool:
        return self.residue_dlog(u) % 2 == 0

    def square_class(self, x: FieldElement) -> SquareClass:
        if x.is_zero():
            raise PrecisionExhausted("square class of zero", obj=self.name)
        v, u = self.unit_part(x)
        return SquareClass(v % 2, self.is_square_residue(u))

    def hilbert_symbol(self, a: FieldElement, b: FieldElement) -> int:
        """Tame Hilbert symbol ``(a, b)`` in this field."""
        a, b = self.coerce(a), self.coerce(b)
        alpha, a0 = self.unit_part(a)
        beta, b0 = self.unit_part(b)
        k = (alpha * beta * ((self.q - 1) // 2)
             + beta * self.residue_dlog(a0) - alpha * self.residue_dlog(b0))
        return 1 if k % 2 == 0 else -1

    @cached_property
    def nonsquare_unit(self) -> FieldElement:
        for u in self.ring_elements(1):
            v = self.residue_vector(u)
            if any(v) and not self.is_square_residue(u):
                return u
        raise AssertionError("residue field has no non-square")

    def square_class_representatives(self) -> list[FieldElement]:
        """One element per square class: 1, u, pi, pi*u."""
        u, pi = self.nonsquare_unit, self.uniformizer
        return [self.one, u, pi, pi * u]

    def __repr__(self):
        return f"<LocalField {self.name} e={self.e} f={self.f} q={self.q}>"


def base_field(context: PrimeContext, name: str | None = None) -> LocalField:
    return LocalField(context, name=name)


def make_extension(base: LocalField, d, name: str | None = None) -> LocalField:
    """Quadratic extension ``base(sqrt d)``; ``d`` must be a non-square."""
    d = base.coerce(d)
    if d.is_zero():
        raise DivisionByZero("cannot adjoin sqrt(0)", obj=base.name)
    if base.square_class(d).trivial:
        raise IsSquare(f"{d} is a square", obj=base.name)
    v = d.valuation()
    k = v // 2
    d_norm = d * base.uniformizer ** (-2 * k)
    return LocalField(base.context, parent=base, d=d_norm, sqrt_shift=k,
                      d_raw=d, name=name)


def valuation(x: FieldElement):
    return x.valuation()


def square_class(x: FieldElement) -> SquareClass:
    return x.field.square_class(x)


def hilbert_symbol(a: FieldElement, b: FieldElement) -> int:
    return a.field.hilbert_symbol(a, b)


class Embedding:
    """Field map ``source -> target`` fixed by the images of layer generators.

    ``gen_images[j]`` is the image of the generator of ``source.ancestors[j+1]``.
    An automorphism is an embedding of a field into itself.
    """

    def __init__(self, source: LocalField, target: LocalField,
                 gen_images: list[FieldElement], check: bool = True):
        if source.base is not target.base:
            raise NotInTower("fields live over different base fields")
        if len(gen_images) != source.depth:
            raise ValueError("need one image per layer")
        self.source = source
        self.target = target
        self.gen_images = [target.coerce(g) for g in gen_images]
        if check:
            for j, layer in enumerate(source.ancestors[1:]):
                img = self.gen_images[j]
                if img * img != self._map(layer.parent, layer.d.raw):
                    raise NotInTower(f"generator image {j} does not square correctly")

    def _map(self, field: LocalField, raw) -> FieldElement:
        if field.parent is None:
            return self.target.coerce(raw)
        a = self._map(field.parent, raw[0])
        b = self._map(field.parent, raw[1])
        return a + b * self.gen_images[field.depth - 1]

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.field is not self.source:
            x = self.source.coerce(x)
        return self._map(self.source, x.raw)

    def restrict(self, sub: LocalField) -> Embedding:
        """Restriction to an ancestor of ``source``."""
        if sub not in self.source.ancestors:
            raise NotInTower(f"{sub.name} is not below {self.source.name}")
        return Embedding(sub, self.target, self.gen_images[:sub.depth], check=False)

    def then(self, other: Embedding) -> Embedding:
        """Composite ``other o self``."""
        if other.source is not self.target:
            raise NotInTower("embeddings do not compose")
        return Embedding(self.source, other.target,
                         [other(g) for g in self.gen_images], check=False)

    @cached_property
    def _left_inverse(self):
        cols = []
        for i in range(self.source.degree):
            coords = [0] * self.source.degree
            coords[i] = 1
            cols.append([Fraction(c) for c in self(self.source.from_flat(coords)).coords()])
        m, k = self.target.degree, self.source.degree
        rows = [[cols[j][i] for j in range(k)] for i in range(m)]
        pivots = []
        work = [r[:] + [Fraction(int(i == t)) for t in range(m)] for i, r in enumerate(rows)]
        r = 0
        for c in range(k):
            piv = next((i for i in range(r, m) if work[i][c] != 0), None)
            if piv is None:
                raise NotInTower("embedding is not injective")
            work[r], work[piv] = work[piv], work[r]
            lead = work[r][c]
            work[r] = [v / lead for v in work[r]]
            for i in range(m):
                if i != r and work[i][c] != 0:
                    fac = work[i][c]
                    work[i] = [a - fac * b for a, b in zip(work[i], work[r])]
            pivots.append(r)
            r += 1
        return [row[k:] for row in work[:k]]

    def preimage(self, y: FieldElement) -> FieldElement:
        """The source element mapping to ``y``; NotInTower if none exists."""
        y = self.target.coerce(y)
        vec = [Fraction(c) for c in y.coords()]
        coords = [sum(a * b for a, b in zip(row, vec)) for row in self._left_inverse]
        coords = [int(c) if c.denominator == 1 else c for c in coords]
        x = self.source.from_flat(coords)
        if self(x) != y:
            raise NotInTower(f"{y} is not in the image of {self.source.name}")
        return x

    def contains(self, y: FieldElement) -> bool:
        try:
            self.preimage(y)
        except NotInTower:
            return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Embedding):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and all(a == b for a, b in zip(self.gen_images, other.gen_images)))

    def __hash__(self):
        return hash((id(self.source), id(self.target)))

    def order(self, limit: int = 16) -> int:
        """Order of an automorphism."""
        if self.source is not self.target:
            raise ValueError("order is defined for automorphisms only")
        g = self
        for k in range(1, limit + 1):
            if all(img == self.source.ancestors[j + 1].gen
                   for j, img in enumerate(g.gen_images)):
                return k
            g = g.then(self)
        raise ValueError("order exceeds limit")

    def fixes(self, y: FieldElement) -> bool:
        return self(y) == y


def identity(field: LocalField) -> Embedding:
    return Embedding(field, field, [field.lift(L.gen) for L in field.ancestors[1:]],
                     check=False)


def inclusion(sub: LocalField, field: LocalField) -> Embedding:
    """The tower inclusion of an ancestor."""
    if sub not in field.ancestors:
        raise NotInTower(f"{sub.name} is not below {field.name}")
    return Embedding(sub, field, [field.lift(L.gen) for L in sub.ancestors[1:]],
                     check=False)


def layer_involution(field: LocalField) -> Embedding:
    """sigma of ``field`` over its parent: negates the top generator."""
    imgs = [field.lift(L.gen) for L in field.ancestors[1:]]
    imgs[-1] = -imgs[-1]
    return Embedding(field, field, imgs, check=False)


def galois_apply(g: Embedding, x: FieldElement) -> FieldElement:
    if g.source is not g.target:
        raise NotInTower("not an automorphism")
    if x.field is not g.source:
        if x.field not in g.source.ancestors:
            raise NotInTower(f"{x.field.name} is not in the tower of {g.source.name}")
        x = g.source.lift(x)
    return g(x)


def norm_to(x: FieldElement, sub: LocalField) -> FieldElement:
    return x.field.norm_to(x, sub)


def relative_norm(x: FieldElement, group: list[Embedding],
                  sub: Embedding) -> FieldElement:
    """Norm to an embedded subfield: product over ``group`` pulled back by ``sub``."""
    acc = x.field.one
    for g in group:
        acc = acc * g(x)
    return sub.preimage(acc)


class UnitGroup:
    """``(R_E/P_E^n)^*`` as canonical representatives with reduced products."""

    def __init__(self, field: LocalField, level: int, elements: list[FieldElement]):
        self.field = field
        self.level = level
        self.elements = elements
        self._index = {field.key(x, level): i for i, x in enumerate(elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def reduce(self, x: FieldElement) -> FieldElement:
        return self.field.reduce(x, self.level)

    def mul(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self.reduce(x * y)

    def inv(self, x: FieldElement) -> FieldElement:
        return self.reduce(x.inverse())

    def __contains__(self, x: FieldElement) -> bool:
        return self.field.key(x, self.level) in self._index

    def generators(self) -> list[FieldElement]:
        return [self.reduce(g) for g in self.field.unit_generators(self.level)]


def unit_group_order(field: LocalField, n: int) -> int:
    if n <= 0:
        return 1
    return field.q ** (n - 1) * (field.q - 1)


def unit_group_enumerate(field: LocalField, n: int,
                         budget: int = DEFAULT_BUDGET) -> UnitGroup:
    card = unit_group_order(field, n)
    if card > budget:
        raise BudgetExceeded(f"|(R/P^{n})^*| = {card} exceeds budget {budget}",
                             cardinality=card, obj=field.name)
    if n <= 0:
        return UnitGroup(field, n, [field.one])
    elems = [x for x in field.ring_elements(n) if any(field.residue_vector(x))]
    assert len(elems) == card
    return UnitGroup(field, n, elems)
