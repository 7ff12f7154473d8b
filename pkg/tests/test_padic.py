"""Exact arithmetic in towers of quadratic extensions of Q_p."""
from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from asailab.errors import (
    BudgetExceeded,
    DivisionByZero,
    IsSquare,
    NotInTower,
    PrecisionExhausted,
)
from asailab.padic import (
    Embedding,
    PrimeContext,
    base_field,
    hilbert_symbol,
    identity,
    inclusion,
    layer_involution,
    make_extension,
    mod_pk,
    unit_group_enumerate,
    unit_group_order,
    vp,
)

from conftest import fields_for


def test_vp_and_mod_pk():
    assert vp(18, 3) == 2
    assert vp(Fraction(5, 9), 3) == -2
    assert mod_pk(Fraction(1, 2), 3, 2) == 5  # 2 * 5 = 10 = 1 mod 9
    with pytest.raises(ValueError):
        mod_pk(Fraction(1, 3), 3, 1)


def test_prime_context_validation():
    with pytest.raises(ValueError):
        PrimeContext(2)
    with pytest.raises(ValueError):
        PrimeContext(9)


def test_unramified_and_ramified_invariants():
    F = base_field(PrimeContext(3))
    K = make_extension(F, 2)
    assert (K.e, K.f, K.q) == (1, 2, 9)
    R = make_extension(F, 3)
    assert (R.e, R.f, R.q) == (2, 1, 3)
    assert R.coerce(3).valuation() == 2
    assert R.gen.valuation() == 1


def test_square_and_zero_rejected():
    F = base_field(PrimeContext(3))
    with pytest.raises(IsSquare):
        make_extension(F, 4)
    with pytest.raises(IsSquare):
        make_extension(F, 7)  # 7 = 1 mod 3 is a 3-adic square
    with pytest.raises(DivisionByZero):
        make_extension(F, 0)


def test_normalisation_keeps_square_root():
    F = base_field(PrimeContext(5))
    K = make_extension(F, 50)  # 50 = 5^2 * 2
    assert K.sqrt_raw * K.sqrt_raw == K.coerce(50)
    assert not K.ramified


def test_valuation_of_zero_raises():
    F = base_field(PrimeContext(3))
    with pytest.raises(PrecisionExhausted):
        F.zero.valuation()


def test_unit_group_counts():
    pf = fields_for(3)
    K_unr = pf.Ks[0]
    assert len(unit_group_enumerate(K_unr, 2)) == 72
    assert len(unit_group_enumerate(pf.F, 2)) == 6
    with pytest.raises(BudgetExceeded) as exc:
        unit_group_enumerate(K_unr, 4, budget=100)
    assert exc.value.cardinality == unit_group_order(K_unr, 4)


def test_hilbert_symbol_examples():
    F = base_field(PrimeContext(3))
    assert F.hilbert_symbol(3, 2) == -1
    assert F.hilbert_symbol(2, 5) == 1
    assert hilbert_symbol(F.coerce(3), F.coerce(3)) == F.hilbert_symbol(3, -1)


def test_precision_guard():
    F = base_field(PrimeContext(3, precision=2))
    with pytest.raises(PrecisionExhausted):
        F.check_level(3)


def test_embeddings_and_involutions():
    pf = fields_for(5)
    K = pf.Ks[0]
    L = pf.Ls[K.name][1]
    sig = layer_involution(L)
    assert sig.order() == 2
    x = L.gen + L.lift(K.gen) * 3 + 1
    assert sig(sig(x)) == x
    assert x * sig(x) == L.lift(L.norm_to(x, K))
    inc = inclusion(K, L)
    assert inc.preimage(inc(K.gen)) == K.gen
    assert identity(L) == Embedding(L, L, [L.lift(K.gen), L.gen])
    with pytest.raises(NotInTower):
        Embedding(K, K, [K.one])  # 1 is not a root of d


elements = st.tuples(st.integers(-30, 30), st.integers(-30, 30), st.integers(0, 2))


def _elt(E, t):
    a, b, v = t
    x = E.from_flat([a, b] + [0] * (E.degree - 2)) if E.degree >= 2 else E.coerce(a)
    return x * E.uniformizer**v


@pytest.mark.parametrize("p", [3, 5, 7])
@given(a=elements, b=elements, c=elements)
def test_field_axioms(p, a, b, c):
    K = fields_for(p).Ks[1]
    x, y, z = _elt(K, a), _elt(K, b), _elt(K, c)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    if not y.is_zero():
        assert (x / y) * y == x
        assert (x * y).valuation() == x.valuation() + y.valuation()
    s = x + y
    if not (x.is_zero() or y.is_zero() or s.is_zero()):
        assert s.valuation() >= min(x.valuation(), y.valuation())


@pytest.mark.parametrize("p", [3, 5, 7])
@given(a=elements, b=elements)
def test_norm_multiplicative(p, a, b):
    pf = fields_for(p)
    K = pf.Ks[2]
    L = pf.Ls[K.name][0]
    x = _elt(L, a) + L.gen
    y = _elt(L, b) + 1
    F = pf.F
    assert L.norm_to(x * y, F) == L.norm_to(x, F) * L.norm_to(y, F)


@pytest.mark.parametrize("p", [3, 5])
def test_hilbert_symbol_bimultiplicative_exhaustive(p):
    F = fields_for(p).F
    reps = [F.coerce(u * p**v) for v in (0, 1) for u in range(1, p)]
    for a in reps:
        assert F.hilbert_symbol(a, -a) == 1
        for b in reps:
            assert F.hilbert_symbol(a, b) == F.hilbert_symbol(b, a)
            for c in reps:
                assert (F.hilbert_symbol(a * b, c)
                        == F.hilbert_symbol(a, c) * F.hilbert_symbol(b, c))


def test_unit_generators_generate():
    K = fields_for(3).Ks[1]
    G = unit_group_enumerate(K, 2)
    seen = {K.key(K.one, 2)}
    frontier = [K.one]
    gens = G.generators()
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                k = K.key(y, 2)
                if k not in seen:
                    seen.add(k)
                    nxt.append(y)
        frontier = nxt
    assert len(seen) == len(G)
