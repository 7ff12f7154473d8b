"""Towers ``L / K / F`` with ``F = Q_p``: classification and explicit lattices."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

from .errors import IsSquare, NotInTower, WrongClass
from .padic import (
    Embedding,
    FieldElement,
    LocalField,
    identity,
    inclusion,
    layer_involution,
    make_extension,
)


class TowerClass(str, enum.Enum):
    BIQUADRATIC = "Biquadratic"
    CYCLIC4 = "Cyclic4"
    NONGALOIS = "NonGaloisDihedral8"

    def __str__(self):
        return self.value


def _split(L: LocalField) -> tuple[LocalField, LocalField]:
    K = L.parent
    if K is None or K.parent is None or K.parent.parent is not None:
        raise NotInTower(f"{L.name} is not a quadratic extension of a quadratic extension of Q_p")
    return K, K.parent


def base_representative(L: LocalField) -> FieldElement | None:
    """An element ``t`` of F with ``delta/t`` a square in K, if one exists."""
    K, F = _split(L)
    delta = L.d_raw
    for t in F.square_class_representatives()[1:]:
        if K.square_class(delta / K.lift(t)).trivial:
            return t
    return None


def classify_tower(L: LocalField) -> TowerClass:
    K, F = _split(L)
    delta = L.d_raw
    if K.square_class(delta).trivial:
        raise IsSquare(f"{delta} is a square", obj=K.name)
    if base_representative(L) is not None:
        return TowerClass.BIQUADRATIC
    if K.square_class(delta.conj() / delta).trivial:
        return TowerClass.CYCLIC4
    return TowerClass.NONGALOIS


@dataclass
class BiquadraticLattice:
    """``F < K, K1, K2 < B`` with the three involutions of ``B/F`` over them."""

    F: LocalField
    K: LocalField
    K1: LocalField
    K2: LocalField
    B: LocalField
    emb_K1: Embedding
    emb_K2: Embedding
    sigma_K: Embedding
    sigma_K1: Embedding
    sigma_K2: Embedding
    metadata: dict = field(default_factory=dict)

    @property
    def conjugations(self) -> tuple[Embedding, Embedding, Embedding]:
        return (self.sigma_K, self.sigma_K1, self.sigma_K2)

    def subfields(self):
        """(subfield, embedding into B, involution of B fixing it)."""
        return [(self.K, inclusion(self.K, self.B), self.sigma_K),
                (self.K1, self.emb_K1, self.sigma_K1),
                (self.K2, self.emb_K2, self.sigma_K2)]

    def norm_to_K(self, x: FieldElement) -> FieldElement:
        return self.B.norm_to(x, self.K)

    def norm_to_K1(self, x: FieldElement) -> FieldElement:
        return self.emb_K1.preimage(x * self.sigma_K1(x))

    def norm_to_K2(self, x: FieldElement) -> FieldElement:
        return self.emb_K2.preimage(x * self.sigma_K2(x))

    def swapped(self) -> BiquadraticLattice:
        return BiquadraticLattice(self.F, self.K, self.K2, self.K1, self.B,
                                  self.emb_K2, self.emb_K1, self.sigma_K,
                                  self.sigma_K2, self.sigma_K1, dict(self.metadata))


def lattice_over(K: LocalField, t: FieldElement, B: LocalField | None = None,
                 names=("K1", "K2", "B")) -> BiquadraticLattice:
    """Lattice of ``B = K(sqrt t)`` for ``t`` in F (``B`` may be given)."""
    F = K.parent
    t = F.coerce(t)
    if B is None:
        B = make_extension(K, K.lift(t), name=names[2])
    root_t = B.sqrt_raw
    root_d = B.lift(K.sqrt_raw)
    pF = B.lift(F.uniformizer)
    K1 = make_extension(F, t, name=names[0])
    K2 = make_extension(F, t * K.d_raw, name=names[1])
    emb1 = Embedding(K1, B, [root_t / pF**K1.sqrt_shift])
    emb2 = Embedding(K2, B, [root_t * root_d / pF**K2.sqrt_shift])
    sig = layer_involution(B)
    sigK = layer_involution(K)
    piK = K.uniformizer
    img = root_t / B.lift(sigK(piK)) ** B.sqrt_shift
    sig1 = Embedding(B, B, [-B.lift(K.gen), img])
    sig2 = sig.then(sig1)
    return BiquadraticLattice(F, K, K1, K2, B, emb1, emb2, sig, sig1, sig2)


def biquadratic_lattice(L: LocalField) -> BiquadraticLattice:
    """Lattice for a Biquadratic tower; ``L`` must be ``K(sqrt t)`` with t in F."""
    if classify_tower(L) is not TowerClass.BIQUADRATIC:
        raise WrongClass(f"{L.name} is not biquadratic over F")
    K, F = _split(L)
    delta = L.d_raw
    if delta.raw[1] != 0:
        raise WrongClass("biquadratic towers must adjoin the root of an element of F "
                         f"(got {delta}; use {base_representative(L)})", obj=L.name)
    return lattice_over(K, F.coerce(delta.raw[0]), B=L,
                        names=(f"{F.name}(sqrt{delta.raw[0]})",
                               f"{F.name}(sqrt{delta.raw[0] * K.d_raw.raw})", L.name))


@dataclass
class DihedralClosure:
    """Subfield lattice of a non-Galois quartic ``L/F`` inside its closure ``M``."""

    L: LocalField
    M: LocalField
    L_prime: LocalField
    emb_L_prime: Embedding
    lattice: BiquadraticLattice
    emb_B: Embedding
    automorphisms: dict
    sigma_ML: Embedding
    sigma_ML_prime: Embedding
    sigma_MB: Embedding
    K_cyclic: LocalField
    metadata: dict = field(default_factory=dict)

    @property
    def B(self) -> LocalField:
        return self.lattice.B

    def norm_to_B(self, x: FieldElement) -> FieldElement:
        return self.emb_B.preimage(x * self.sigma_MB(x))

    def fixing_group(self, emb: Embedding) -> list[Embedding]:
        gens = [emb(E.gen) for E in emb.source.ancestors[1:]]
        return [g for g in self.automorphisms.values() if all(g.fixes(y) for y in gens)]

    @cached_property
    def group(self) -> list[Embedding]:
        return list(self.automorphisms.values())


def galois_closure(L: LocalField) -> DihedralClosure:
    if classify_tower(L) is not TowerClass.NONGALOIS:
        raise WrongClass(f"{L.name} is not a non-Galois quartic tower")
    K, F = _split(L)
    delta = L.d_raw
    sdelta = delta.conj()
    M = make_extension(L, L.lift(sdelta), name=f"M[{L.name}]")
    r1 = M.lift(L.sqrt_raw)
    r2 = M.sqrt_raw
    piK = K.uniformizer
    sigK = layer_involution(K)
    kL, kM = L.sqrt_shift, M.sqrt_shift

    auts = {}
    for eps in (0, 1):
        imgK = M.lift(K.gen) * (-1 if eps else 1)
        for s1 in (1, -1):
            h_r1 = s1 * (r2 if eps else r1)
            h_piK = M.lift(sigK(piK) if eps else piK)
            imgL = h_r1 / h_piK**kL
            hL = Embedding(L, M, [imgK, imgL])
            for s2 in (1, -1):
                h_r2 = s2 * (r1 if eps else r2)
                imgM = h_r2 / hL(L.uniformizer) ** kM
                auts[(eps, s1, s2)] = Embedding(M, M, [imgK, imgL, imgM])

    N = K.norm_to(delta, F)
    lattice = lattice_over(K, N, names=(f"{F.name}(sqrt N)", f"{F.name}(sqrt Nd)", f"B[{L.name}]"))
    B = lattice.B
    emb_B = Embedding(B, M, [M.lift(K.gen), r1 * r2 / M.lift(piK) ** B.sqrt_shift])
    Lp = make_extension(K, sdelta, name=f"L'[{L.name}]")
    emb_Lp = Embedding(Lp, M, [M.lift(K.gen), r2 / M.lift(piK) ** Lp.sqrt_shift])

    closure = DihedralClosure(
        L=L, M=M, L_prime=Lp, emb_L_prime=emb_Lp, lattice=lattice, emb_B=emb_B,
        automorphisms=auts, sigma_ML=auts[(0, 1, -1)], sigma_ML_prime=auts[(0, -1, 1)],
        sigma_MB=auts[(0, -1, -1)], K_cyclic=None)
    cyclic = []
    for Ki, emb in ((lattice.K1, lattice.emb_K1), (lattice.K2, lattice.emb_K2)):
        grp = closure.fixing_group(emb.then(emb_B))
        if any(g.order() == 4 for g in grp):
            cyclic.append(Ki)
    if cyclic:
        closure.K_cyclic = cyclic[0]
    if len(cyclic) != 1:
        closure.metadata["ambiguity"] = f"{len(cyclic)} cyclic candidates for K'"
    return closure


def quadratic_extensions(E: LocalField, names=None) -> list[LocalField]:
    """The three quadratic extensions of ``E`` (one per non-trivial square class)."""
    reps = E.square_class_representatives()[1:]
    names = names or [None] * 3
    return [make_extension(E, d, name=n) for d, n in zip(reps, names)]


__all__ = [
    "TowerClass", "classify_tower", "BiquadraticLattice", "biquadratic_lattice",
    "lattice_over", "DihedralClosure", "galois_closure", "quadratic_extensions",
    "base_representative", "identity",
]
