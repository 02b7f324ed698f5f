from __future__ import annotations

import json
from dataclasses import replace

import pytest

from multisymplectic.exterior import AlternatingForm, eval_form
from multisymplectic.g2 import contains_associative, is_coassociative, is_cross_closed, phi0
from multisymplectic.spaces import type_i_predicates
from multisymplectic.verify import (
    SPECIAL_KINDS,
    SUITES,
    SuiteConfig,
    UnknownSuiteError,
    make_special_subspace,
    run_suite,
)


def _strip_time(report):
    return replace(report, wall_time=0.0)


@pytest.mark.parametrize("suite", ["typeI-prop31", "typeI-prop34", "typeII-props", "g2-identities"])
def test_suites_are_deterministic(suite):
    cfg = SuiteConfig(suite, trials=4, seed=7)
    assert _strip_time(run_suite(cfg)) == _strip_time(run_suite(cfg))


@pytest.mark.parametrize("suite", ["typeI-prop31", "typeI-prop34", "typeII-props", "g2-identities"])
@pytest.mark.parametrize("form", ["phi0", "volume:4"])
def test_green_suites_pass_small_runs(suite, form):
    r = run_suite(SuiteConfig(suite, trials=5, seed=1, form=form))
    assert r.ok and r.unknown == 0 and r.total > 0, r.failures[:2]


def test_seed_changes_draws():
    # generic-3 draws always fail the corollary, so failures expose the inputs
    a = run_suite(SuiteConfig("corollaries", trials=2, seed=1))
    b = run_suite(SuiteConfig("corollaries", trials=2, seed=2))
    assert [f["inputs"] for f in a.failures] != [f["inputs"] for f in b.failures]


def test_explicit_form_config():
    omega = AlternatingForm(4, 2, {(1, 2): 1, (3, 4): 1})
    r = run_suite(SuiteConfig("typeI-prop31", trials=3, form=omega))
    assert r.ok and r.config["form"] == "user:4:2"


def test_unknown_suite_and_bad_config():
    with pytest.raises(UnknownSuiteError):
        run_suite(SuiteConfig("nope"))
    with pytest.raises(ValueError):
        SuiteConfig("theorem1", trials=0)
    with pytest.raises(ValueError):
        run_suite(SuiteConfig("typeI-prop31", form="e8"))


def test_report_json_roundtrip():
    r = run_suite(SuiteConfig("g2-identities", trials=3))
    data = json.loads(r.to_json())
    assert data["suite_name"] == "g2-identities"
    assert data["passed"] == r.passed and data["failed"] == 0
    assert "double-cross" in data["checks"]
    assert r.summary().startswith("g2-identities: passed=")


def test_suite_registry():
    assert set(SUITES) == {"typeI-prop31", "typeI-prop34", "typeII-props",
                           "g2-identities", "theorem1", "corollaries"}


@pytest.mark.parametrize("seed", range(3))
def test_special_kinds_have_their_property(g2, seed):
    ms = g2.multisymplectic
    for kind in SPECIAL_KINDS:
        w = make_special_subspace(kind, seed, g2)
        dim = int(kind[-1])
        assert w.dim == dim, kind
        if kind == "cross-closed-3":
            assert is_cross_closed(g2, w)
        elif kind == "generic-3":
            assert not is_cross_closed(g2, w)
        elif kind == "isotropic-3":
            assert eval_form(phi0(), list(w.basis)) == 0
        elif kind == "coassociative-4":
            assert is_coassociative(g2, w) and type_i_predicates(ms, w, 2).lagrangian
        elif kind in ("assoc-containing-4", "dim5", "dim6"):
            assert contains_associative(g2, w)
        elif kind == "generic-4":
            assert not contains_associative(g2, w) and not is_coassociative(g2, w)


def test_special_subspace_is_seeded(g2):
    assert make_special_subspace("coassociative-4", 3, g2) == make_special_subspace("coassociative-4", 3, g2)
    with pytest.raises(ValueError):
        make_special_subspace("dim9", 0, g2)


def test_failures_carry_inputs():
    r = run_suite(SuiteConfig("corollaries", trials=2, seed=0))
    assert r.failed >= 1
    f = r.failures[0]
    assert set(f) == {"trial", "check", "inputs", "expected", "got"}
    assert f["check"] == "corollary:generic-3"
    assert all(isinstance(c, str) for row in f["inputs"]["W"] for c in row)
