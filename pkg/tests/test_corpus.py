"""Corpus generation and the per-item checks."""
from __future__ import annotations

import pytest

from asailab import corpus


@pytest.fixture(scope="module")
def small():
    return corpus.generate(seed=11, primes=(3,), per_field=3)


def test_generation_is_deterministic(small):
    again = corpus.generate(seed=11, primes=(3,), per_field=3)
    assert [(i.name, i.kind, i.tags) for i in small] == [(i.name, i.kind, i.tags) for i in again]


def test_all_kinds_present(small):
    assert {i.kind for i in small} == set(corpus.KINDS)
    assert {i.tower for i in small if i.kind == "dihedral"} >= {"Biquadratic", "Cyclic4"}


def test_sweep_passes(small):
    results = corpus.sweep(small)
    summ = corpus.summary(results)
    assert summ["errors"] == 0 and summ["failed"] == 0
    assert summ["checks"]["egal"]["pass"] == len(small)
    js = results[0].to_json()
    assert set(js) >= {"name", "kind", "lw", "las", "checks"}


def test_max_nongalois_cap():
    items = corpus.generate(seed=2, primes=(3,), per_field=4, max_nongalois=1)
    assert sum(i.tower == "NonGaloisDihedral8" for i in items) <= 1


def test_max_level_zero_gives_unramified_random_characters():
    items = corpus.generate(seed=3, primes=(5,), per_field=2, max_level=0)
    for it in items:
        if it.kind == "steinberg" and it.tags == ("random",):
            assert it.pi.chi.level == 0
