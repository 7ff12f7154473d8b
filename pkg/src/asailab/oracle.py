"""Brute-force verifiers at finite level.

Everything here works by enumerating residue rings with the arithmetic of
``padic`` and deliberately avoids the character, Euler-factor and Asai
machinery: norm images are enumerated rather than predicted by Hilbert
symbols, square classes come from listing residue squares, and
distinction is decided by evaluating the character on every enumerated
element of the intermediate fields.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .errors import BudgetExceeded, WrongClass
from .padic import (
    DEFAULT_BUDGET,
    Embedding,
    FieldElement,
    LocalField,
    layer_involution,
    make_extension,
    unit_group_enumerate,
    unit_group_order,
)


# norm images -----------------------------------------------------------------

@dataclass
class NormImage:
    """Image of ``N_{E/E'}`` in ``E'^* / (1 + P'^n)``.

    The image is ``{pi'^v * u : f_rel | v, u in u0^(v/f_rel) * units}`` where
    ``units`` is the set of reduced unit norms and ``u0`` the unit part of
    the norm of a uniformiser of E.
    """

    sub: LocalField
    level: int
    f_rel: int
    units: frozenset
    u0: FieldElement
    metadata: dict = dc_field(default_factory=dict)

    def contains(self, x: FieldElement) -> bool:
        x = self.sub.coerce(x)
        v = x.valuation()
        if v % self.f_rel:
            return False
        u = x * self.sub.uniformizer ** (-v)
        u = u * self.u0 ** (-(v // self.f_rel))
        return self.sub.key(u, self.level) in self.units

    __contains__ = contains

    @property
    def unit_index(self) -> int:
        return unit_group_order(self.sub, self.level) // len(self.units)

    @property
    def index(self) -> int:
        """Index in ``Z x (R'/P'^n)^*``."""
        return self.f_rel * self.unit_index


def _norm_map(E: LocalField, sub, conj: Embedding | None):
    if isinstance(sub, Embedding):
        if conj is None:
            raise ValueError("an embedded subfield needs the involution fixing it")
        return sub.source, lambda x: sub.preimage(x * conj(x))
    sub = sub or E.parent
    if sub is not E.parent:
        raise WrongClass(f"{sub.name} is not the quadratic subfield of {E.name}")
    return sub, lambda x: E.norm_to(x, sub)


def norm_image_enum(E: LocalField, level: int, sub=None, conj: Embedding | None = None,
                    budget: int = DEFAULT_BUDGET) -> NormImage:
    """Enumerate the norm image of the quadratic extension ``E`` over ``sub``.

    ``sub`` is ``E.parent`` (default) or an ``Embedding`` of a subfield
    together with the involution ``conj`` of E fixing it.
    """
    S, norm = _norm_map(E, sub, conj)
    e_rel = E.e // S.e
    f_rel = E.f // S.f
    if e_rel * f_rel != 2:
        raise WrongClass(f"{E.name} is not quadratic over {S.name}")
    # N(1 + P_E^m) lies in 1 + P_S^level for this m (trace of P_E^m is in P_S^level).
    m = e_rel * (level - 1) + 1 if level > 0 else 0
    U = unit_group_enumerate(E, m, budget)
    units = frozenset(S.key(norm(u), level) for u in U)
    v, u0 = S.unit_part(norm(E.uniformizer))
    assert v == f_rel
    return NormImage(S, level, f_rel, units, u0,
                     {"source_level": m, "enumerated": len(U)})


# finite-level models of E^* -----------------------------------------------------

def _finite_quotient(S: LocalField, level: int, budget: int):
    """Representatives of ``S^* / (1 + P^n) <pi^2>``: ``pi^v * u`` with v in {0, 1}."""
    U = unit_group_enumerate(S, level, budget)
    pi = S.uniformizer
    return [(v, u, u * pi**v) for v in (0, 1) for u in U]


def _generated_subgroup(S: LocalField, level: int, gens):
    """Subgroup of ``Z/2 x (R/P^n)^*`` generated by ``(v, u)`` pairs."""
    def key(v, u):
        return (v % 2, S.key(u, level))

    start = (0, S.one)
    seen = {key(*start): start}
    frontier = [start]
    gens = [(v % 2, S.reduce(u, level)) for v, u in gens]
    while frontier:
        nxt = []
        for v, u in frontier:
            for gv, gu in gens:
                w = (v + gv, S.reduce(u * gu, level))
                k = key(*w)
                if k not in seen:
                    seen[k] = w
                    nxt.append(w)
        frontier = nxt
    return set(seen)


def _image_pairs(img: NormImage):
    """``(v, u)`` pairs generating the norm image modulo ``pi^2``."""
    S = img.sub
    pairs = [(0, S.from_flat(k)) for k in img.units]
    pairs.append((img.f_rel, img.u0))
    return pairs


def verify_normbiquad(lattice, level: int = 2, budget: int = DEFAULT_BUDGET) -> bool:
    """F^* lies in the norms from B to K, checked two ways at finite level.

    (a) every element ``pi^v u`` of F^* (v in {0, 1}, u mod p^n) lies in the
        enumerated image of ``N_{B/K}``;
    (b) the enumerated images of ``N_{K'/F}`` and ``N_{K''/F}`` generate
        ``F^* / (1 + p^n) <p^2>``.
    """
    F, K, B = lattice.F, lattice.K, lattice.B
    if B.parent is not K:
        raise WrongClass(f"{B.name} is not a quadratic extension of {K.name}")
    img_BK = norm_image_enum(B, level, budget=budget)
    direct = all(img_BK.contains(K.lift(x)) for _, _, x in _finite_quotient(F, level, budget))
    img1 = norm_image_enum(lattice.K1, level, budget=budget)
    img2 = norm_image_enum(lattice.K2, level, budget=budget)
    gens = _image_pairs(img1) + _image_pairs(img2)
    generated = _generated_subgroup(F, level, gens)
    total = 2 * unit_group_order(F, level)
    return direct and len(generated) == total


@dataclass
class KernelReport:
    witnessed: int
    kernel_classes: int
    norm_kernel_classes: int
    ok: bool


def ker_lemma_report(lattice, level: int = 2, budget: int = DEFAULT_BUDGET) -> KernelReport:
    """Witness every kernel element of ``N_{B/K}`` as ``N_{B/K'}(x)/N_{B/K''}(sigma x)``.

    Kernel elements are produced as ``u = x / sigma_{B/K}(x)`` for ``x`` running
    over ``pi_B^v * (R_B/P_B^n)^*``; for each one the identity is re-evaluated
    exactly through the embeddings of K' and K''.  As a coverage check the
    classes of these ``u`` modulo ``P_B^n`` are compared with the classes of
    units whose norm is congruent to 1.
    """
    B, K = lattice.B, lattice.K
    sig, sig1, sig2 = lattice.sigma_K, lattice.sigma_K1, lattice.sigma_K2
    U = unit_group_enumerate(B, level, budget)
    ok = True
    classes = set()
    count = 0
    for v in (0, 1):
        for y in U:
            x = y * B.uniformizer**v
            u = x / sig(x)
            if B.norm_to(u, K) != K.one:
                ok = False
            n1 = lattice.emb_K1.preimage(x * sig1(x))
            sx = sig(x)
            n2 = lattice.emb_K2.preimage(sx * sig2(sx))
            if lattice.emb_K1(n1) / lattice.emb_K2(n2) != u:
                ok = False
            classes.add(B.key(u, level))
            count += 1
    if B.key(B.one / sig(B.one), level) not in classes:
        ok = False
    # classes of units with N(u) = 1 mod P_K^k, k the level seen by the norm
    k = -(-level // (B.e // K.e))
    norm_kernel = {B.key(u, level) for u in U if K.key(B.norm_to(u, K), k) == K.key(K.one, k)}
    ok = ok and classes == norm_kernel
    return KernelReport(count, len(classes), len(norm_kernel), ok)


def verify_ker_lemma(lattice, level: int = 2, budget: int = DEFAULT_BUDGET) -> bool:
    return ker_lemma_report(lattice, level, budget).ok


# square classes and tower classification ------------------------------------------

def residue_squares(E: LocalField) -> set:
    """Residue vectors of the non-zero squares of the residue field."""
    return {E.residue_vector(x * x) for x in E.ring_elements(1) if any(E.residue_vector(x))}


def is_square_oracle(E: LocalField, x: FieldElement) -> bool:
    """``x`` is a square in E iff its valuation is even and its unit part is a residue square."""
    v = x.valuation()
    if v % 2:
        return False
    u = x * E.uniformizer ** (-v)
    return E.residue_vector(u) in residue_squares_cached(E)


def _base_elements(F: LocalField):
    """Representatives of F^*/F^{*2}: ``p^v * a`` with a a residue."""
    return [F.coerce(a * F.p**v) for v in (0, 1) for a in range(1, F.p)]


def classify_tower_oracle(L: LocalField) -> str:
    """Classify ``L = K(sqrt delta)`` over F by enumerated square tests.

    Biquadratic: ``delta * t`` is a square for some t in F^*.
    Cyclic4: ``delta * sigma(delta)`` is a square, i.e. sigma(delta)/delta is.
    Otherwise the Galois closure has degree 8.
    """
    K = L.parent
    F = K.parent
    delta = L.d_raw
    if is_square_oracle(K, delta):
        raise WrongClass(f"{delta} is a square in {K.name}")
    if any(is_square_oracle(K, delta * K.lift(t)) for t in _base_elements(F)):
        return "Biquadratic"
    sdelta = layer_involution(K)(delta)
    if is_square_oracle(K, delta * sdelta):
        return "Cyclic4"
    return "NonGaloisDihedral8"


# Hilbert symbol against norm images -------------------------------------------------

def _random_element(E: LocalField, rng: random.Random, vrange=(-2, 3)) -> FieldElement:
    while True:
        coords = [rng.randrange(E.p**3) for _ in range(E.degree)]
        x = E.from_flat(coords)
        if not x.is_zero():
            return x * E.uniformizer ** rng.randrange(*vrange)


def hilbert_vs_norms(E: LocalField, samples: int, seed: int = 0, level: int = 1,
                     budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """Compare ``hilbert_symbol(a, b)`` with ``a in N(E(sqrt b))`` on random pairs.

    Returns ``(pairs checked, disagreements)``.  Norm images are enumerated once
    per quadratic extension, keyed by an enumerated square class of ``b``.
    For odd p the norm group contains ``1 + P``, so level 1 already decides
    membership; higher levels give the same answer at a higher cost.
    """
    rng = random.Random(seed)
    images = {}
    reps = {}
    checked = bad = 0
    for _ in range(samples):
        a = _random_element(E, rng)
        b = _random_element(E, rng)
        vb = b.valuation()
        ub = b * E.uniformizer ** (-vb)
        cls = (vb % 2, E.residue_vector(ub) in residue_squares_cached(E))
        if cls == (0, True):
            expected = 1
        else:
            if cls not in images:
                reps[cls] = b
                images[cls] = norm_image_enum(make_extension(E, b), level, budget=budget)
            expected = 1 if images[cls].contains(a) else -1
        checked += 1
        if E.hilbert_symbol(a, b) != expected:
            bad += 1
    return checked, bad


def residue_squares_cached(E: LocalField) -> set:
    cache = E.__dict__.get("_oracle_squares")
    if cache is None:
        cache = E.__dict__["_oracle_squares"] = residue_squares(E)
    return cache


# distinction by enumeration ------------------------------------------------------------

def _sign(value) -> int | None:
    """``+1``/``-1`` for the exact values 1 and -1, None otherwise."""
    if value.qexp != 0:
        return None
    if value.zeta == 0:
        return 1
    if value.zeta * 2 == 1:
        return -1
    return None


@dataclass
class DistinctionVerdict:
    trivial_on: tuple[bool, bool]
    eta_on: tuple[bool, bool]

    @property
    def distinguished(self) -> bool:
        return any(self.trivial_on)

    @property
    def eta_distinguished(self) -> bool:
        return any(self.eta_on)


def independent_distinguished(omega, lattice, level: int | None = None,
                              budget: int = DEFAULT_BUDGET) -> DistinctionVerdict:
    """Evaluate ``omega`` (a character of B) on enumerated elements of K' and K''.

    ``omega`` is distinguished iff it is trivial on K'^* or on K''^*; it is
    eta-distinguished iff on some K_i it equals the sign ``x -> +1`` exactly
    when ``x`` is a norm from ``B = K_i(sqrt d_K)`` (norm image enumerated).
    """
    B = lattice.B
    level = max(level or 0, omega.level, 1)
    trivial, eta = [], []
    for Ki, emb, sig in ((lattice.K1, lattice.emb_K1, lattice.sigma_K1),
                         (lattice.K2, lattice.emb_K2, lattice.sigma_K2)):
        e_rel = B.e // Ki.e
        n = -(-level // e_rel)
        U = unit_group_enumerate(Ki, n, budget)
        pts = [u for u in U] + [Ki.uniformizer]
        vals = [omega(emb(x)) for x in pts]
        trivial.append(all(v.is_one for v in vals))
        img = norm_image_enum(B, n, sub=emb, conj=sig, budget=budget)
        eta.append(all(_sign(v) == (1 if img.contains(x) else -1)
                       for x, v in zip(pts, vals)))
    return DistinctionVerdict(tuple(trivial), tuple(eta))


__all__ = [
    "NormImage", "norm_image_enum", "verify_normbiquad", "verify_ker_lemma",
    "ker_lemma_report", "KernelReport", "residue_squares", "is_square_oracle",
    "classify_tower_oracle", "hilbert_vs_norms", "independent_distinguished",
    "DistinctionVerdict", "BudgetExceeded",
]
