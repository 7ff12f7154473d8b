"""Both routes to the Asai factor on hand-built and structured instances."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from asailab import asai
from asailab.asai import (
    CharSum,
    DihedralSupercuspidal,
    Induced,
    PrincipalSeries,
    SpecialTwist,
    TwistedSteinberg,
    check_admissible,
    check_egal,
    distinguishing_twists,
    eta_distinguished,
    induction_decompose,
    is_distinguished,
    l1_factor,
    las_factor,
    lw_factor,
    parameter,
    reduce_nongalois,
    representation,
)
from asailab.characters import ONE, ExactValue, SmoothChar, absvalue_char, compose_norm, conj
from asailab.corpus import eta_extension, random_char
from asailab.errors import Inadmissible
from asailab.euler import EulerFactor
from asailab.padic import layer_involution
from asailab.towers import TowerClass

from conftest import fields_for

X1 = ExactValue(0, 0)      # 1
XM = ExactValue("1/2", 0)  # -1


def _unramified_K(p):
    return fields_for(p).Ks[0]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_closed_form_steinberg(p):
    K = _unramified_K(p)
    pi = TwistedSteinberg(SmoothChar.trivial(K))
    want = EulerFactor([ExactValue(0, -1), XM])  # 1/((1 - q^-1 X)(1 + X))
    assert las_factor(pi) == want
    assert lw_factor(pi) == want


@pytest.mark.parametrize("p", [3, 5, 7])
def test_closed_form_principal(p):
    K = _unramified_K(p)
    one = SmoothChar.trivial(K)
    pi = PrincipalSeries(one, one)
    want = EulerFactor([X1, X1, X1, XM])  # 1/((1 - X)^2 (1 - X^2))
    assert las_factor(pi) == want
    assert lw_factor(pi) == want


@pytest.mark.parametrize("p", [3, 5, 7])
def test_closed_form_cyclic(p):
    pf = fields_for(p)
    rng = random.Random(p)
    done = 0
    for K in pf.Ks:
        for L in pf.Ls[K.name]:
            if asai._tower_class(L) is not TowerClass.CYCLIC4:
                continue
            for _ in range(6):
                om, _ = random_char(L, rng)
                pi = DihedralSupercuspidal(om)
                try:
                    check_admissible(pi)
                except Inadmissible:
                    continue
                assert las_factor(pi) == EulerFactor()
                assert lw_factor(pi) == EulerFactor()
                done += 1
    assert done


def test_parameter_roundtrip():
    K = _unramified_K(3)
    one = SmoothChar.trivial(K)
    for pi in (TwistedSteinberg(one), PrincipalSeries(one, one)):
        rho = parameter(pi)
        assert isinstance(rho, (SpecialTwist, CharSum))
        assert type(representation(rho)) is type(pi)


def test_inadmissible_inputs():
    pf = fields_for(5)
    K = pf.Ks[0]
    one = SmoothChar.trivial(K)
    with pytest.raises(Inadmissible):
        check_admissible(PrincipalSeries(absvalue_char(K, 1), one))
    with pytest.raises(Inadmissible):
        check_admissible(PrincipalSeries(one, absvalue_char(K, 1)))
    L = pf.Ls[K.name][0]
    with pytest.raises(Inadmissible):  # Galois-invariant character is not regular
        check_admissible(DihedralSupercuspidal(compose_norm(absvalue_char(K, 1), L)))
    with pytest.raises(Inadmissible):
        check_admissible(TwistedSteinberg(SmoothChar.trivial(pf.F)))


def test_biquadratic_trivial_on_K1_is_distinguished():
    pf = fields_for(3)
    K = pf.Ks[0]
    rng = random.Random(1)
    for L in pf.Ls[K.name]:
        if asai._tower_class(L) is not TowerClass.BIQUADRATIC:
            continue
        lat = asai.lattice_of(L)
        hits = 0
        for _ in range(20):
            th, _ = random_char(L, rng)
            om = th / conj(th, lat.sigma_K1)
            pi = DihedralSupercuspidal(om)
            try:
                check_admissible(pi)
            except Inadmissible:
                continue
            hits += 1
            assert is_distinguished(pi)
            assert not eta_distinguished(pi)
            assert check_egal(pi).equal
            assert ONE in las_factor(pi).poles()
        assert hits


def test_decomposition_shapes():
    pf = fields_for(5)
    K = pf.Ks[1]
    one = SmoothChar.trivial(K)
    dec = induction_decompose(CharSum(one, absvalue_char(K, Fraction(1, 2))))
    assert len(dec.summands) == 3
    dec = induction_decompose(SpecialTwist(one))
    assert [s.sp_dim for s in dec.summands] == [1, 3]
    cyc = [L for L in pf.Ls[pf.Ks[0].name]
           if asai._tower_class(L) is TowerClass.CYCLIC4][0]
    om = SmoothChar.from_params(cyc, 1, 1)
    assert induction_decompose(Induced(om)).irreducible


@pytest.mark.parametrize("p", [3, 7])
def test_nongalois_reduction_both_solutions_agree(p):
    pf = fields_for(p)
    rng = random.Random(20 + p)
    checked = 0
    for K in pf.Ks:
        for L in pf.Ls[K.name]:
            if asai._tower_class(L) is not TowerClass.NONGALOIS:
                continue
            for _ in range(8):
                om, _ = random_char(L, rng)
                pi = DihedralSupercuspidal(om)
                try:
                    check_admissible(pi)
                except Inadmissible:
                    continue
                red = reduce_nongalois(om)
                assert check_egal(pi).equal
                if not red.ok:
                    continue
                assert len(red.descended) == 2
                lat = red.lattice
                facs = set()
                for mu in red.descended:
                    parts = asai._induced_biquadratic(lat, mu)
                    f = EulerFactor()
                    for s in parts:
                        f = f * asai.summand_lfactor(s)
                    facs.add(f)
                assert len(facs) == 1
                checked += 1
    assert checked


def test_distinction_is_pole_at_zero_for_unitary_steinberg():
    """For unitary twisted Steinberg representations, distinction is a pole at 0."""
    for p in (3, 5, 7):
        pf = fields_for(p)
        rng = random.Random(p)
        for K in pf.Ks:
            cands = [SmoothChar.trivial(K), eta_extension(K)]
            for _ in range(6):
                chi, _ = random_char(K, rng)
                # unitary: force |chi(pi)| = 1
                cands.append(SmoothChar(K, chi.level, ExactValue(chi.uniformizer_value.zeta, 0),
                                        chi.unit_value, "unitary"))
            for chi in cands:
                pi = TwistedSteinberg(chi)
                assert is_distinguished(pi) == (las_factor(pi).multiplicity(ONE) > 0)


def test_non_unitary_pole_without_distinction():
    """chi|F = |.|^-1 puts a pole at 0 into L_1 without distinction (outside the unitary range)."""
    K = _unramified_K(3)
    chi = absvalue_char(K, Fraction(-1, 2))  # restricts to |.|_F^-1 on F
    pi = TwistedSteinberg(chi)
    assert l1_factor(pi).multiplicity(ONE) == 1
    assert not is_distinguished(pi)


def test_eta_distinguished_examples():
    pf = fields_for(5)
    for K in pf.Ks:
        e = eta_extension(K)
        sig = layer_involution(K)
        # principal series with lam|F = mu|F = eta
        th = SmoothChar.from_params(K, 1, 1)
        pi = PrincipalSeries(e, e * (th / conj(th, sig)))
        try:
            check_admissible(pi)
        except Inadmissible:
            continue
        assert eta_distinguished(pi)
    # Steinberg twisted by a character trivial on F is eta-distinguished
    K = pf.Ks[0]
    th = SmoothChar.from_params(K, 1, 1)
    assert eta_distinguished(TwistedSteinberg(th / conj(th, layer_involution(K))))


def test_twist_metadata_common_pole():
    K = _unramified_K(3)
    one = SmoothChar.trivial(K)
    ts = distinguishing_twists(PrincipalSeries(one, absvalue_char(K, Fraction(1, 2))))
    assert "common_pole" in ts.metadata
