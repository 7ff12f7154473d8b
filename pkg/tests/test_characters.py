"""Exact values and smooth characters."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from asailab.characters import (
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
from asailab.corpus import random_char
from asailab.errors import BudgetExceeded, FieldMismatch
from asailab.padic import layer_involution, unit_group_enumerate

from conftest import fields_for

fracs = st.fractions(min_value=-4, max_value=4, max_denominator=16)
values = st.builds(ExactValue, fracs, fracs)


@given(a=values, b=values, c=values)
def test_exact_value_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * a.inverse() == ONE
    assert (a / b) * b == a
    assert 0 <= a.zeta < 1


@given(a=values, f=st.integers(1, 4))
def test_roots_are_roots(a, f):
    rs = a.roots(f)
    assert len(set(rs)) == f
    assert all(r**f == a for r in rs)
    assert rs == sorted(rs)


@given(a=values)
def test_exact_value_json_roundtrip(a):
    assert ExactValue.from_json(a.to_json()) == a


def test_from_params_level_bounds():
    K = fields_for(3).Ks[0]
    chi = SmoothChar.from_params(K, 0, 3, (1, 2), ExactValue("1/2", 0))
    assert chi.is_unramified()
    assert chi(K.coerce(3)) == ExactValue("1/2", 0)
    with pytest.raises(BudgetExceeded):
        SmoothChar.from_generator_images(K, 3, [])
    with pytest.raises(ValueError):
        SmoothChar.from_generator_images(K, 1, ["1/3"])  # order must divide q - 1 = 8


def test_field_mismatch():
    pf = fields_for(3)
    with pytest.raises(FieldMismatch):
        SmoothChar.trivial(pf.Ks[0]) * SmoothChar.trivial(pf.Ks[1])


@pytest.mark.parametrize("p", [3, 5])
def test_random_characters_are_homomorphisms(p):
    pf = fields_for(p)
    rng = random.Random(p)
    for K in pf.Ks:
        for _ in range(4):
            chi, _ = random_char(K, rng)
            assert chi.verify()
            assert chi.conductor() <= chi.level


@pytest.mark.parametrize("p", [3, 5, 7])
def test_eta_kernel_is_norms(p):
    pf = fields_for(p)
    F = pf.F
    for K in pf.Ks:
        eta = eta_char(K)
        assert (eta**2).is_trivial()
        assert not eta.is_trivial()
        # norms of sample elements lie in the kernel
        for x in [K.gen + 1, K.gen * 2 + 3, K.uniformizer, K.coerce(p + 1)]:
            assert eta(K.norm_to(x, F)).is_one
        assert eta.is_unramified() == (not K.ramified)


def test_absvalue_character():
    K = fields_for(5).Ks[1]
    chi = absvalue_char(K, 1)
    assert chi(K.uniformizer) == ExactValue(0, -1)  # |pi_K| = q_K^-1 = 5^-1
    assert chi(K.coerce(5)) == ExactValue(0, -2)
    K0 = fields_for(5).Ks[0]
    assert absvalue_char(K0, 1)(K0.coerce(5)) == ExactValue(0, -2)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_restrict_compose_norm_consistency(p):
    pf = fields_for(p)
    rng = random.Random(10 + p)
    F = pf.F
    for K in pf.Ks:
        psi, _ = random_char(F, rng)
        bc = compose_norm(psi, K)
        assert is_regular(bc, layer_involution(K)) is False
        # restriction of a base change to F is psi^2
        assert restrict(bc, F).equals(psi**2)
        chi, _ = random_char(K, rng)
        sig = layer_involution(K)
        # chi * chi^sigma is trivial on the kernel of the norm and restricts to chi|F^2
        assert restrict(chi * conj(chi, sig), F).equals(restrict(chi, F) ** 2)


def test_conductor_and_minimized():
    K = fields_for(3).Ks[1]
    chi = SmoothChar.from_params(K, 2, 1, (0,))
    assert chi.conductor() == 1
    assert chi.minimized().level == 1
    assert SmoothChar.from_params(K, 2, 0, (1,)).conductor() == 2


def test_verify_detects_non_homomorphism():
    K = fields_for(3).Ks[0]
    bad = SmoothChar(K, 1, ONE, lambda u: Fraction(K.residue_dlog(u) ** 2, 8))
    assert not bad.verify()


def test_descend_through_norm_biquadratic():
    """Descending omega o N_{B/K} recovers omega up to the quadratic character."""
    pf = fields_for(5)
    K = pf.Ks[0]
    F = pf.F
    rng = random.Random(7)
    from asailab.towers import lattice_over
    lat = lattice_over(K, F.uniformizer)
    K1 = lat.K1
    mu, _ = random_char(K1, rng)
    chi = compose_norm(mu, lat.B, norm=lat.norm_to_K1)
    sols = descend_through_norm(chi, lat.emb_K1, lat.sigma_K1)
    assert sols is not None and len(sols) == 2
    assert any(s.equals(mu) for s in sols)
    G = unit_group_enumerate(lat.B, 2)
    for s in sols:
        for x in list(G)[:40] + [lat.B.uniformizer]:
            assert s(lat.norm_to_K1(x)) == chi(x)
