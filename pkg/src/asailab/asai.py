"""Asai L-factors of ordinary GL(2, K) representations by two routes.

``lw_factor`` goes through the Weil-Deligne parameter and the decomposition
of its multiplicative induction; ``las_factor`` multiplies the L_1 factor
read off the Kirillov model by the radical exceptional factor built from
the set of twists ``|.|_F^{-s0}`` that distinguish the representation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .characters import (
    ONE,
    ExactValue,
    SmoothChar,
    absvalue_char,
    compose_norm,
    conj,
    descend_through_norm,
    eta_char,
    is_regular,
    restrict,
)
from .errors import Inadmissible
from .euler import UNIT, EulerFactor, tate_lfactor
from .padic import FieldElement, LocalField, layer_involution
from .towers import (
    BiquadraticLattice,
    DihedralClosure,
    TowerClass,
    biquadratic_lattice,
    classify_tower,
    galois_closure,
)


# representations ---------------------------------------------------------

def _quadratic_over_base(K: LocalField):
    if K.parent is None or K.parent.parent is not None:
        raise Inadmissible(f"{K.name} is not a quadratic extension of Q_p")


@dataclass
class DihedralSupercuspidal:
    omega: SmoothChar
    name: str = ""

    @property
    def L(self) -> LocalField:
        return self.omega.field

    @property
    def K(self) -> LocalField:
        return self.L.parent

    @property
    def tower_class(self) -> TowerClass:
        return _tower_class(self.L)


@dataclass
class TwistedSteinberg:
    chi: SmoothChar
    name: str = ""

    @property
    def K(self) -> LocalField:
        return self.chi.field


@dataclass
class PrincipalSeries:
    lam: SmoothChar
    mu: SmoothChar
    name: str = ""

    @property
    def K(self) -> LocalField:
        return self.lam.field


GL2Rep = DihedralSupercuspidal | TwistedSteinberg | PrincipalSeries


@dataclass
class Induced:
    omega: SmoothChar

    @property
    def K(self) -> LocalField:
        return self.omega.field.parent


@dataclass
class SpecialTwist:
    chi: SmoothChar
    sp_dim: int = 2

    @property
    def K(self) -> LocalField:
        return self.chi.field


@dataclass
class CharSum:
    lam: SmoothChar
    mu: SmoothChar

    @property
    def K(self) -> LocalField:
        return self.lam.field


WDRep2 = Induced | SpecialTwist | CharSum


def parameter(pi) -> WDRep2:
    """Langlands parameter of an ordinary representation."""
    if isinstance(pi, DihedralSupercuspidal):
        return Induced(pi.omega)
    if isinstance(pi, TwistedSteinberg):
        return SpecialTwist(pi.chi)
    if isinstance(pi, PrincipalSeries):
        return CharSum(pi.lam, pi.mu)
    raise TypeError(pi)


def representation(rho, name: str = ""):
    if isinstance(rho, Induced):
        return DihedralSupercuspidal(rho.omega, name)
    if isinstance(rho, SpecialTwist):
        return TwistedSteinberg(rho.chi, name)
    if isinstance(rho, CharSum):
        return PrincipalSeries(rho.lam, rho.mu, name)
    raise TypeError(rho)


# cached tower data ---------------------------------------------------------

def _cached(L: LocalField, attr: str, build):
    cache = L.__dict__.setdefault("_asai_cache", {})
    if attr not in cache:
        cache[attr] = build(L)
    return cache[attr]


def _tower_class(L: LocalField) -> TowerClass:
    return _cached(L, "class", classify_tower)


def lattice_of(L: LocalField) -> BiquadraticLattice:
    return _cached(L, "lattice", biquadratic_lattice)


def closure_of(L: LocalField) -> DihedralClosure:
    return _cached(L, "closure", galois_closure)


def check_admissible(pi) -> None:
    if isinstance(pi, (DihedralSupercuspidal, Induced)):
        L = pi.omega.field
        if L.parent is None:
            raise Inadmissible("dihedral character must live on a quadratic extension of K")
        _quadratic_over_base(L.parent)
        _tower_class(L)
        if not is_regular(pi.omega, layer_involution(L)):
            raise Inadmissible("omega is not regular for L/K (not supercuspidal)",
                               obj=getattr(pi, "name", None))
    elif isinstance(pi, (TwistedSteinberg, SpecialTwist)):
        _quadratic_over_base(pi.chi.field)
    elif isinstance(pi, (PrincipalSeries, CharSum)):
        _quadratic_over_base(pi.lam.field)
        if pi.mu.field is not pi.lam.field:
            raise Inadmissible("lambda and mu live on different fields")
        ratio = pi.lam / pi.mu
        K = pi.lam.field
        for a in (1, -1):
            if ratio.equals(absvalue_char(K, a)):
                raise Inadmissible("lambda/mu = |.|^{+-1}: not irreducible",
                                   obj=getattr(pi, "name", None))
    else:
        raise TypeError(pi)


def central_char(pi) -> SmoothChar:
    if isinstance(pi, DihedralSupercuspidal):
        return eta_char(pi.L) * restrict(pi.omega, pi.K)
    if isinstance(pi, TwistedSteinberg):
        return pi.chi**2
    if isinstance(pi, PrincipalSeries):
        return pi.lam * pi.mu
    raise TypeError(pi)


def to_F(chi: SmoothChar) -> SmoothChar:
    return restrict(chi, chi.field.base)


def sigma_of(K: LocalField):
    return layer_involution(K)


# non-Galois reduction --------------------------------------------------------

@dataclass
class Reduction:
    """Outcome of pushing a dihedral character through the degree-8 closure."""

    closure: DihedralClosure
    descended: list[SmoothChar] | None

    @property
    def lattice(self) -> BiquadraticLattice:
        return self.closure.lattice

    @property
    def ok(self) -> bool:
        return bool(self.descended)


def reduce_nongalois(omega: SmoothChar) -> Reduction:
    """``omega o N_{M/L} = mu o N_{M/B}``: both solutions ``mu``, or None."""
    cl = closure_of(omega.field)
    chi = compose_norm(omega, cl.M)
    mus = descend_through_norm(chi, cl.emb_B, cl.sigma_MB)
    return Reduction(cl, mus)


# Weil-Deligne route ------------------------------------------------------------

@dataclass(frozen=True)
class CharOnF:
    chi: SmoothChar
    sp_dim: int = 1


@dataclass(frozen=True)
class InducedFromQuadratic:
    field: LocalField
    nu: SmoothChar


@dataclass
class Decomposition:
    summands: list
    irreducible: bool = False
    metadata: dict = field(default_factory=dict)


def _induced_biquadratic(lat: BiquadraticLattice, omega: SmoothChar) -> list:
    return [InducedFromQuadratic(lat.K1, restrict(omega, lat.emb_K1)),
            InducedFromQuadratic(lat.K2, restrict(omega, lat.emb_K2))]


def induction_decompose(rho) -> Decomposition:
    check_admissible(rho)
    if isinstance(rho, Induced):
        L = rho.omega.field
        cls = _tower_class(L)
        if cls is TowerClass.BIQUADRATIC:
            return Decomposition(_induced_biquadratic(lattice_of(L), rho.omega))
        if cls is TowerClass.CYCLIC4:
            return Decomposition([], irreducible=True)
        red = reduce_nongalois(rho.omega)
        if not red.ok:
            return Decomposition([], irreducible=True, metadata={
                "nongalois_reduction": "failed; L_W = 1 relies on the dichotomy of the reduction"})
        parts = [_induced_biquadratic(red.lattice, mu) for mu in red.descended]
        return Decomposition(parts[0], metadata={
            "nongalois_reduction": "descended to biquadratic B",
            "descent_choices": len(red.descended),
            "alternatives": parts[1:]})
    if isinstance(rho, SpecialTwist):
        chiF = to_F(rho.chi)
        eta = eta_char(rho.K)
        return Decomposition([CharOnF(chiF * eta, 1), CharOnF(chiF, 3)])
    if isinstance(rho, CharSum):
        sig = sigma_of(rho.K)
        return Decomposition([CharOnF(to_F(rho.lam), 1), CharOnF(to_F(rho.mu), 1),
                              InducedFromQuadratic(rho.K, rho.lam * conj(rho.mu, sig))])
    raise TypeError(rho)


def summand_lfactor(s) -> EulerFactor:
    if isinstance(s, CharOnF):
        return tate_lfactor(s.chi, shift=1 if s.sp_dim == 3 else 0)
    if isinstance(s, InducedFromQuadratic):
        return tate_lfactor(s.nu)
    raise TypeError(s)


def lw_factor(rho) -> EulerFactor:
    if not isinstance(rho, (Induced, SpecialTwist, CharSum)):
        rho = parameter(rho)
    dec = induction_decompose(rho)
    L = UNIT
    for s in dec.summands:
        L = L * summand_lfactor(s)
    return L


# Rankin-Selberg route ------------------------------------------------------------

def l1_factor(pi) -> EulerFactor:
    check_admissible(pi)
    if isinstance(pi, DihedralSupercuspidal):
        return UNIT
    if isinstance(pi, TwistedSteinberg):
        return tate_lfactor(to_F(pi.chi), shift=1)
    if isinstance(pi, PrincipalSeries):
        lF, mF = tate_lfactor(to_F(pi.lam)), tate_lfactor(to_F(pi.mu))
        if pi.lam.equals(pi.mu):
            return lF * lF
        return lF | mF
    raise TypeError(pi)


@dataclass
class TwistSet:
    """Values ``alpha = q_F^{s0}`` such that pi is ``|.|_F^{-s0}``-distinguished."""

    values: frozenset
    metadata: dict = field(default_factory=dict)

    def __contains__(self, a: ExactValue) -> bool:
        return a in self.values

    def __iter__(self):
        return iter(sorted(self.values))

    def __len__(self):
        return len(self.values)


def _unramified_fiber(chi: SmoothChar) -> set:
    """``alpha`` with ``chi = |.|_E^{-s0}``, ``alpha = q_F^{s0}``: the f-th roots of chi(pi)."""
    if not chi.is_unramified():
        return set()
    return set(chi.uniformizer_value.roots(chi.field.f))


def _twists_on_lattice(lat: BiquadraticLattice, omega: SmoothChar) -> tuple[set, set]:
    a = _unramified_fiber(restrict(omega, lat.emb_K1))
    b = _unramified_fiber(restrict(omega, lat.emb_K2))
    return a, b


def distinguishing_twists(pi) -> TwistSet:
    check_admissible(pi)
    meta = {}
    if isinstance(pi, DihedralSupercuspidal):
        cls = pi.tower_class
        if cls is TowerClass.CYCLIC4:
            return TwistSet(frozenset(), {"tower": str(cls)})
        if cls is TowerClass.BIQUADRATIC:
            lat, omega = lattice_of(pi.L), pi.omega
        else:
            red = reduce_nongalois(pi.omega)
            if not red.ok:
                return TwistSet(frozenset(), {"tower": str(cls),
                                              "nongalois_reduction": "failed"})
            lat, omega = red.lattice, red.descended[0]
            meta["nongalois_reduction"] = "descended to biquadratic B"
        a, b = _twists_on_lattice(lat, omega)
        meta["tower"] = str(cls)
        meta["common_pole"] = bool(a & b)
        return TwistSet(frozenset(a | b), meta)
    if isinstance(pi, TwistedSteinberg):
        c = to_F(pi.chi) * eta_char(pi.K)
        vals = {c.uniformizer_value} if c.is_unramified() else set()
        return TwistSet(frozenset(vals), meta)
    if isinstance(pi, PrincipalSeries):
        sig = sigma_of(pi.K)
        fiber = _unramified_fiber(pi.lam * conj(pi.mu, sig))
        lF, mF = to_F(pi.lam), to_F(pi.mu)
        common = set()
        if lF.is_unramified() and mF.is_unramified() \
                and lF.uniformizer_value == mF.uniformizer_value:
            common = {lF.uniformizer_value}
        if not pi.lam.equals(pi.mu):
            meta["common_pole"] = bool(fiber & common)
        return TwistSet(frozenset(fiber | common), meta)
    raise TypeError(pi)


def lradex_factor(pi) -> EulerFactor:
    return EulerFactor(distinguishing_twists(pi).values)


def las_factor(pi) -> EulerFactor:
    return l1_factor(pi) * lradex_factor(pi)


def is_distinguished(pi) -> bool:
    return ONE in distinguishing_twists(pi)


def eta_distinguished(pi) -> bool:
    """``eta_{K/F}``-distinction: pi twisted by an extension of eta to K is distinguished."""
    check_admissible(pi)
    if isinstance(pi, DihedralSupercuspidal):
        if pi.tower_class is TowerClass.CYCLIC4:
            return False
        if pi.tower_class is TowerClass.BIQUADRATIC:
            lat, omega = lattice_of(pi.L), pi.omega
        else:
            red = reduce_nongalois(pi.omega)
            if not red.ok:
                return False
            lat, omega = red.lattice, red.descended[0]
        d = lat.K.d_raw
        for Ki, emb in ((lat.K1, lat.emb_K1), (lat.K2, lat.emb_K2)):
            eta = _hilbert_char(Ki, Ki.coerce(d))
            if restrict(omega, emb).equals(eta):
                return True
        return False
    if isinstance(pi, TwistedSteinberg):
        # sigma(chi) x theta with theta|F = eta: distinguished iff chi|F = 1
        return to_F(pi.chi).is_trivial()
    if isinstance(pi, PrincipalSeries):
        sig = sigma_of(pi.K)
        eta = eta_char(pi.K)
        lF, mF = to_F(pi.lam), to_F(pi.mu)
        prod = pi.lam * conj(pi.mu, sig)
        return (lF.equals(eta) and mF.equals(eta)) or prod.is_trivial()
    raise TypeError(pi)


def _hilbert_char(E: LocalField, d: FieldElement) -> SmoothChar:
    def hv(x):
        return Fraction(0) if E.hilbert_symbol(x, d) == 1 else Fraction(1, 2)
    return SmoothChar(E, 1, ExactValue(hv(E.uniformizer)), hv, "eta")


@dataclass
class EgalReport:
    lw: EulerFactor
    las: EulerFactor

    @property
    def equal(self) -> bool:
        return self.lw == self.las

    def to_json(self) -> dict:
        return {"lw": self.lw.to_json(), "las": self.las.to_json(), "equal": self.equal}


def check_egal(pi) -> EgalReport:
    return EgalReport(lw_factor(parameter(pi)), las_factor(pi))
