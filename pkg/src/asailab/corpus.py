"""Seeded families of ordinary representations and the sweep that checks them.

The generator mixes random level-<=2 characters (uniformiser values
``e(k/8) q^(a/2)``) with structured ones that exercise the interesting
branches: trivial and base-changed characters, absolute-value twists,
characters extending ``eta_{K/F}``, and dihedral characters of the form
``theta / theta^sigma'`` that are trivial on an intermediate field.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import asai
from .characters import (
    ExactValue,
    SmoothChar,
    absvalue_char,
    compose_norm,
    conj,
    eta_char,
    restrict,
)
from .errors import AsaiError, Inadmissible
from .padic import LocalField, PrimeContext, base_field, layer_involution, make_extension
from .towers import TowerClass, base_representative, quadratic_extensions

KINDS = ("dihedral", "steinberg", "principal")


@dataclass
class CorpusItem:
    name: str
    kind: str
    pi: object
    p: int
    tags: tuple = ()
    description: dict = field(default_factory=dict)

    @property
    def tower(self) -> str | None:
        if self.kind == "dihedral":
            return str(self.pi.tower_class)
        return None


# fields ---------------------------------------------------------------------------

@dataclass
class PrimeFields:
    p: int
    F: LocalField
    Ks: list
    Ls: dict  # K.name -> list of quadratic extensions of K


def prime_fields(p: int, precision: int = 6) -> PrimeFields:
    """F = Q_p, its three quadratic extensions, and the three quadratic extensions of each.

    Quadratic extensions of K that are biquadratic over F are built as
    ``K(sqrt t)`` with t in F, which is the form the lattice code expects.
    """
    F = base_field(PrimeContext(p, precision))
    Ks = quadratic_extensions(F, names=[f"K{i}[{p}]" for i in (1, 2, 3)])
    Ls = {}
    for K in Ks:
        out = []
        for i, d in enumerate(K.square_class_representatives()[1:], 1):
            probe = make_extension(K, d)
            t = base_representative(probe)
            out.append(probe if t is None else make_extension(K, K.lift(t)))
            out[-1].name = f"{K.name}.L{i}"
        Ls[K.name] = out
    return PrimeFields(p, F, Ks, Ls)


# characters -------------------------------------------------------------------------

def _uniformizer_value(rng: random.Random) -> ExactValue:
    return ExactValue(Fraction(rng.randrange(8), 8), Fraction(rng.randrange(-2, 3), 2))


def _random_char(E: LocalField, rng: random.Random, max_level: int = 2) -> tuple[SmoothChar, dict]:
    level = rng.randrange(max_level + 1)
    k = rng.randrange(E.q - 1)
    c = [rng.randrange(E.p) for _ in range(E.f)]
    uv = _uniformizer_value(rng)
    chi = SmoothChar.from_params(E, level, k, c, uv, label=f"rand{level}")
    return chi, {"field": E.name, "level": level, "k": k, "c": c,
                 "uniformizer": uv.to_json()}


def eta_extension(K: LocalField) -> SmoothChar:
    """A level-one character of K whose restriction to F is ``eta_{K/F}``."""
    cache = K.__dict__.setdefault("_corpus_eta_ext", [])
    if cache:
        return cache[0]
    F = K.parent
    eta = eta_char(K)
    w = None
    if K.ramified:
        _, w = K.unit_part(K.coerce(F.p))
    for k in range(K.q - 1):
        lam0 = SmoothChar.from_params(K, 1, k)
        if not all(restrict(lam0, F).unit_value(g) == eta.unit_value(g)
                   for g in F.unit_generators(1)):
            continue
        target = eta(F.uniformizer)
        if K.ramified:
            uv = (target / ExactValue(lam0.unit_value(w))).principal_root(2)
        else:
            uv = target
        lam = SmoothChar.from_params(K, 1, k, (), uv, label="etaext")
        if restrict(lam, F).equals(eta):
            cache.append(lam)
            return lam
    raise AsaiError("no level-one extension of eta found", obj=K.name)


# generation ----------------------------------------------------------------------------

def _dihedral_chars(L: LocalField, rng: random.Random, tries: int, random_char):
    """(omega, tags, description) candidates on L."""
    K = L.parent
    cls = asai._tower_class(L)
    out = []
    for _ in range(tries):
        om, d = random_char(L, rng)
        out.append((om, ("random",), d))
    if cls is TowerClass.BIQUADRATIC:
        lat = asai.lattice_of(L)
        for sig, nm in ((lat.sigma_K1, "K1"), (lat.sigma_K2, "K2")) * max(1, tries // 2):
            th, d = random_char(L, rng)
            om = th / conj(th, sig)
            a = Fraction(rng.randrange(-2, 3), 2)
            out.append((om * absvalue_char(L, a), ("trivial_on", nm, "abs_twist"),
                        {"theta": d, "trivial_on": nm, "abs": str(a)}))
            th, d = random_char(L, rng)
            om = compose_norm(eta_extension(K), L) * (th / conj(th, sig))
            out.append((om, ("eta_related", nm), {"theta": d, "eta_on": nm}))
    return out


def generate(seed: int = 0, primes=(3, 5, 7), per_field: int = 10,
             max_level: int = 2, max_nongalois: int | None = None) -> list[CorpusItem]:
    """Deterministic list of admissible corpus items.

    ``max_nongalois`` caps the dihedral instances on non-Galois towers (each
    needs the degree-8 closure); ``None`` means no cap.
    """
    rng = random.Random(seed)

    def random_char(E, rng):
        return _random_char(E, rng, max_level)
    items: list[CorpusItem] = []

    def add(kind, pi, p, tags, desc):
        try:
            asai.check_admissible(pi)
        except Inadmissible:
            return
        items.append(CorpusItem(f"{kind}-{len(items):04d}", kind, pi, p, tuple(tags), desc))

    def n_nongalois():
        return sum(it.tower == str(TowerClass.NONGALOIS) for it in items)

    for p in primes:
        pf = prime_fields(p)
        F = pf.F
        for K in pf.Ks:
            sig = layer_involution(K)
            absK = [absvalue_char(K, Fraction(a, 2)) for a in (-2, -1, 0, 1, 2)]
            # twisted Steinberg
            for _ in range(per_field):
                chi, d = random_char(K, rng)
                add("steinberg", asai.TwistedSteinberg(chi), p, ("random",), {"chi": d})
            psi, d = random_char(F, rng)
            add("steinberg", asai.TwistedSteinberg(compose_norm(psi, K)), p,
                ("base_change",), {"psi": d})
            add("steinberg", asai.TwistedSteinberg(SmoothChar.trivial(K)), p, ("trivial",), {})
            add("steinberg", asai.TwistedSteinberg(eta_extension(K)), p, ("eta_related",), {})
            th, d = random_char(K, rng)
            add("steinberg", asai.TwistedSteinberg(th / conj(th, sig)), p,
                ("trivial_on_F",), {"theta": d})
            # principal series
            for _ in range(per_field):
                lam, d1 = random_char(K, rng)
                mu, d2 = random_char(K, rng)
                add("principal", asai.PrincipalSeries(lam, mu), p, ("random",),
                    {"lam": d1, "mu": d2})
            for a in absK:
                for b in absK[::2]:
                    add("principal", asai.PrincipalSeries(a, b), p, ("abs",),
                        {"lam": a.label, "mu": b.label})
            lam, d = random_char(K, rng)
            add("principal", asai.PrincipalSeries(lam, conj(lam, sig).inverse()), p,
                ("lam_mu_sigma_trivial",), {"lam": d})
            e = eta_extension(K)
            th, d = random_char(K, rng)
            add("principal", asai.PrincipalSeries(e, e * (th / conj(th, sig))), p,
                ("eta_related",), {"theta": d})
            psi, d = random_char(F, rng)
            bc = compose_norm(psi, K)
            add("principal", asai.PrincipalSeries(bc, bc * absK[3]), p, ("base_change",),
                {"psi": d})
            # dihedral supercuspidals
            for L in pf.Ls[K.name]:
                cls = asai._tower_class(L)
                for om, tags, desc in _dihedral_chars(L, rng, per_field, random_char):
                    if cls is TowerClass.NONGALOIS and max_nongalois is not None \
                            and n_nongalois() >= max_nongalois:
                        continue
                    add("dihedral", asai.DihedralSupercuspidal(om), p, tags,
                        dict(desc, L=L.name, tower=str(cls)))
    return items


# sweep ----------------------------------------------------------------------------------

@dataclass
class ItemResult:
    item: CorpusItem
    lw: object = None
    las: object = None
    l1: object = None
    twists: tuple = ()
    distinguished: bool | None = None
    eta_distinguished: bool | None = None
    central_value: ExactValue | None = None
    error: str | None = None
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.error is None and all(self.checks.values())

    def to_json(self) -> dict:
        out = {"name": self.item.name, "kind": self.item.kind, "p": self.item.p,
               "tags": list(self.item.tags), "checks": dict(sorted(self.checks.items()))}
        if self.item.tower:
            out["tower"] = self.item.tower
        if self.error:
            out["error"] = self.error
            return out
        out.update(lw=self.lw.to_json(), las=self.las.to_json(), l1=self.l1.to_json(),
                   twists=[a.to_json() for a in self.twists],
                   distinguished=self.distinguished,
                   eta_distinguished=self.eta_distinguished)
        return out


def _central_on_F(pi):
    c = asai.to_F(asai.central_char(pi))
    return c.uniformizer_value if c.is_unramified() else None


def evaluate(item: CorpusItem) -> ItemResult:
    """Both routes plus the pole-structure checks for one item."""
    pi = item.pi
    res = ItemResult(item)
    try:
        rep = asai.check_egal(pi)
        res.lw, res.las = rep.lw, rep.las
        res.l1 = asai.l1_factor(pi)
        ts = asai.distinguishing_twists(pi)
        res.twists = tuple(ts)
        res.distinguished = asai.ONE in ts
        res.eta_distinguished = asai.eta_distinguished(pi)
        res.central_value = _central_on_F(pi)
    except AsaiError as exc:
        res.error = f"{type(exc).__name__}: {exc}"
        return res
    c = res.checks
    c["egal"] = rep.equal
    if item.kind == "dihedral":
        c["l1_trivial"] = res.l1.degree() == 0
        c["simple_poles"] = res.las.has_simple_poles()
        c["poles_are_twists"] = sorted(res.las.poles()) == sorted(res.twists)
    if res.central_value is None:
        c["ramified_center_no_twists"] = not res.twists
    else:
        c["alpha_squared_center"] = all(a**2 == res.central_value for a in res.twists)
    if item.kind == "dihedral" and item.tower == str(TowerClass.BIQUADRATIC):
        c["exclusive"] = not (res.distinguished and res.eta_distinguished)
    return res


def sweep(items) -> list[ItemResult]:
    return [evaluate(it) for it in items]


def summary(results) -> dict:
    by_check: dict = {}
    for r in results:
        for k, v in r.checks.items():
            ok, total = by_check.get(k, (0, 0))
            by_check[k] = (ok + bool(v), total + 1)
    return {
        "instances": len(results),
        "errors": sum(r.error is not None for r in results),
        "failed": sum(not r.ok for r in results),
        "by_kind": {k: sum(r.item.kind == k for r in results) for k in KINDS},
        "checks": {k: {"pass": a, "total": b} for k, (a, b) in sorted(by_check.items())},
    }


random_char = _random_char

__all__ = ["CorpusItem", "ItemResult", "PrimeFields", "prime_fields", "random_char",
           "eta_extension", "generate", "evaluate", "sweep", "summary", "KINDS"]
