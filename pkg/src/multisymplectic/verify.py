"""Seeded property suites over random rational instances.

Each suite draws its instances from ``random.Random(f"{seed}:{suite}:{trial}")``
so a fixed :class:`SuiteConfig` always produces the same :class:`SuiteReport`
(wall time aside).  A check records ``passed``, ``failed`` or ``unknown``;
``unknown`` is reserved for semi-decisions that ran out of trials and is
never counted as a failure.
"""

from __future__ import annotations

import json
import random
import time
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

from .exterior import AlternatingForm, Multivector, decomposable, exterior_power, wedge
from .g2 import (
    G2Space,
    check_cross_identity,
    classify_g2_subspace,
    contains_associative,
    corollary_check,
    eval_form,
    find_associative_in,
    inner,
    is_associative,
    is_coassociative,
    is_cross_closed,
    metric_from_phi,
    standard_volume,
)
from .linalg import (
    Matrix,
    Subspace,
    format_rational,
    orthogonal_complement,
    random_subspace,
    random_vector,
)
from .spaces import (
    MultisymplecticSpace,
    Status,
    _solve_last_factor,
    extend_to_lagrangian,
    r_nondegenerate,
    type_i_complement,
    type_i_predicates,
    type_ii_coisotropic,
    type_ii_complement,
    type_ii_isotropic,
    volume_form,
)

__all__ = [
    "SPECIAL_KINDS",
    "SUITES",
    "SuiteConfig",
    "SuiteReport",
    "UnknownSuiteError",
    "make_special_subspace",
    "run_suite",
]


class UnknownSuiteError(KeyError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    """``form`` is ``"phi0"``, ``"volume:N"`` or an explicit :class:`AlternatingForm`."""

    suite_name: str
    trials: int = 25
    seed: int | str = 0
    coeff_bound: int = 9
    form: str | AlternatingForm = "phi0"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.coeff_bound < 1:
            raise ValueError("coeff_bound must be at least 1")

    def space(self) -> MultisymplecticSpace:
        return resolve_form(self.form)

    def form_label(self) -> str:
        return self.form if isinstance(self.form, str) else f"user:{self.form.n}:{self.form.degree}"


def resolve_form(form) -> MultisymplecticSpace:
    if isinstance(form, AlternatingForm):
        return MultisymplecticSpace(form)
    if form == "phi0":
        return _g2().multisymplectic
    if isinstance(form, str) and form.startswith("volume:"):
        return MultisymplecticSpace.volume(int(form.split(":", 1)[1]))
    raise ValueError(f"unknown form choice {form!r}")


_G2: G2Space | None = None


def _g2() -> G2Space:
    global _G2
    if _G2 is None:
        _G2 = G2Space.standard()
    return _G2


@dataclass
class SuiteReport:
    suite_name: str
    passed: int = 0
    failed: int = 0
    unknown: int = 0
    failures: list[dict] = field(default_factory=list)
    wall_time: float = 0.0
    checks: dict[str, dict[str, int]] = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.unknown

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def summary(self) -> str:
        return (f"{self.suite_name}: passed={self.passed} failed={self.failed} "
                f"unknown={self.unknown} ({self.wall_time:.2f}s)")


class _Recorder:
    def __init__(self, name: str):
        self.report = SuiteReport(name)
        self.counts: dict[str, dict[str, int]] = defaultdict(lambda: {"passed": 0, "failed": 0, "unknown": 0})
        self.trial = 0

    def check(self, name: str, ok: bool | None, inputs=None, expected=None, got=None) -> None:
        """``ok=None`` records an unknown outcome."""
        key = "unknown" if ok is None else ("passed" if ok else "failed")
        setattr(self.report, key, getattr(self.report, key) + 1)
        self.counts[name][key] += 1
        if ok is False:
            self.report.failures.append({
                "trial": self.trial, "check": name, "inputs": _jsonable(inputs),
                "expected": _jsonable(expected), "got": _jsonable(got),
            })


def _jsonable(x):
    if isinstance(x, Subspace):
        return [[format_rational(c) for c in row] for row in x.basis]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (bool, int, str, float)) or x is None:
        return x
    if isinstance(x, Status):
        return x.value
    return str(x)


def _trial_rng(seed, suite: str, trial: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{trial}")


# ---------------------------------------------------------------- subspaces

SPECIAL_KINDS = (
    "cross-closed-3", "generic-3", "isotropic-3",
    "assoc-containing-4", "generic-4", "coassociative-4",
    "dim5", "dim6",
    "structured-1", "structured-2",
    "generic-1", "generic-2", "generic-5", "generic-6",
)


def _small_vector(rng: random.Random, bound: int = 3) -> tuple:
    while True:
        v = random_vector(7, bound, rng)
        if any(v):
            return v


def _with_random_vectors(space: G2Space, base: Subspace, total: int, rng) -> Subspace:
    w = base
    while w.dim < total:
        w = w + Subspace.span([_small_vector(rng)], 7)
    return w


def make_special_subspace(kind: str, seed, space: G2Space | None = None) -> Subspace:
    """Structured or generic test subspaces of the G2 space.

    Generic kinds are re-drawn until they avoid the structured case they are
    meant to contrast with.
    """
    g2 = space or _g2()
    rng = seed if isinstance(seed, random.Random) else random.Random(f"{kind}:{seed}")
    if kind == "cross-closed-3":
        while True:
            u, v = _small_vector(rng), _small_vector(rng)
            w = Subspace.span([u, v, g2.cross(u, v)], 7)
            if w.dim == 3:
                return w
    if kind == "coassociative-4":
        while True:
            line = Subspace.span([_small_vector(rng)], 7)
            w = extend_to_lagrangian(g2.multisymplectic, line, 2, rng)
            if w.dim == 4:
                return w
    if kind == "isotropic-3":
        return _random_subspace_of(make_special_subspace("coassociative-4", rng, g2), 3, rng)
    if kind == "assoc-containing-4":
        return _with_random_vectors(g2, make_special_subspace("cross-closed-3", rng, g2), 4, rng)
    if kind in ("dim5", "dim6"):
        return _with_random_vectors(g2, make_special_subspace("cross-closed-3", rng, g2), int(kind[-1]), rng)
    if kind in ("structured-1", "structured-2"):
        d = int(kind[-1])
        idx = sorted(rng.sample(range(7), d))
        return Subspace.span([[int(i == j) for i in range(7)] for j in idx], 7)
    if kind.startswith("generic-"):
        d = int(kind.split("-")[1])
        while True:
            w = random_subspace(7, d, seed=rng)
            if d == 3 and is_cross_closed(g2, w):
                continue
            if d == 4 and (contains_associative(g2, w) or is_coassociative(g2, w)):
                continue
            return w
    raise ValueError(f"unknown subspace kind {kind!r}")


def _random_subspace_of(w: Subspace, d: int, rng: random.Random) -> Subspace:
    while True:
        rows = [w.combination([rng.randint(-3, 3) for _ in range(w.dim)]) for _ in range(d)]
        u = Subspace.span(rows, w.ambient_dim)
        if u.dim == d:
            return u


def _random_subspace(n: int, d: int, rng: random.Random, bound: int) -> Subspace:
    if d == 0:
        return Subspace.zero(n)
    return random_subspace(n, d, coeff_bound=bound, seed=rng)


# ---------------------------------------------------------------- suites

def _suite_typei_prop31(rec: _Recorder, cfg: SuiteConfig, space: MultisymplecticSpace, rng_for) -> None:
    n, k = space.n, space.k
    V, Z = Subspace.full(n), Subspace.zero(n)
    for trial in range(cfg.trials):
        rec.trial = trial
        rng = rng_for(trial)
        l, l1, l2 = (rng.randint(1, k) for _ in range(3))
        w = _random_subspace(n, rng.randint(0, n), rng, cfg.coeff_bound)
        u = _random_subspace(n, rng.randint(0, n), rng, cfg.coeff_bound)
        sub = _random_subspace_of(w, rng.randint(0, w.dim), rng) if w.dim else Z
        inputs = {"W": w, "U": u, "l": l, "l1": l1, "l2": l2}
        comp = lambda x, m: type_i_complement(space, x, m)

        rec.check("zero-complement", comp(Z, l).equals(V), inputs)
        rec.check("full-complement", comp(V, l).is_zero(), inputs)
        rec.check("monotone", comp(sub, l).includes(comp(w, l)), {**inputs, "sub": sub})
        uw = u + w
        rec.check("sum-inclusion", (comp(u, l) & comp(w, l)).includes(comp(uw, l)), inputs)
        rec.check("sum-equality-l1", comp(uw, 1).equals(comp(u, 1) & comp(w, 1)), inputs)
        if l1 + l2 <= k + 1:
            rec.check("mixed-degree", comp(uw, l1 + l2 - 1).includes(comp(u, l1) & comp(w, l2)), inputs)
        rec.check("max-rule", comp(u & w, max(l1, l2)).includes(comp(u, l1) + comp(w, l2)), inputs)
        chain = [comp(w, m) for m in range(1, k + 1)]
        rec.check("filtration", all(b.includes(a) for a, b in zip(chain, chain[1:])), inputs)
        if w.dim < l:
            rec.check("above-dimension", comp(w, l).equals(V), inputs)
        _codim_checks(rec, space, w, inputs)


@lru_cache(maxsize=None)
def _nondegenerate(space: MultisymplecticSpace, r: int) -> bool:
    return r_nondegenerate(space.omega, r, trials=20, metric=space.metric).status is Status.PROVEN


def _codim_checks(rec: _Recorder, space: MultisymplecticSpace, w: Subspace, inputs) -> None:
    """Codimension bounds on whatever isotropic instance shows up."""
    k = space.k
    if type_i_predicates(space, w, 1).isotropic:
        rec.check("codim-1-isotropic", w.codim >= k, inputs, f">= {k}", w.codim)
    for r in range(1, k + 1):
        if type_ii_isotropic(space, w, r) and _nondegenerate(space, r):
            rec.check("codim-typeii-isotropic", w.codim >= k + 1 - r, {**inputs, "r": r}, f">= {k + 1 - r}", w.codim)


def _suite_typei_prop34(rec: _Recorder, cfg: SuiteConfig, space: MultisymplecticSpace, rng_for) -> None:
    n, k = space.n, space.k
    for trial in range(cfg.trials):
        rec.trial = trial
        rng = rng_for(trial)
        line = _random_subspace(n, 1, rng, cfg.coeff_bound)
        hyper = _random_subspace(n, n - 1, rng, cfg.coeff_bound)
        rec.check("line-1-isotropic", type_i_predicates(space, line, 1).isotropic, {"W": line})
        rec.check("hyperplane-k-coisotropic", type_i_predicates(space, hyper, k).coisotropic, {"W": hyper})

        iso1 = extend_to_lagrangian(space, line, 1, rng)
        rec.check("1-isotropic-codim", iso1.codim >= k, {"W": iso1}, f">= {k}", iso1.codim)

        l = rng.randint(1, k)
        w = _random_subspace(n, rng.randint(0, min(l, n)), rng, cfg.coeff_bound)
        inputs = {"W": w, "l": l}
        rec.check("small-subspace-isotropic", type_i_predicates(space, w, l).isotropic, inputs)
        for lp in range(l, k + 1):
            lag = extend_to_lagrangian(space, w, lp, rng)
            ok = lag.includes(w) and type_i_predicates(space, lag, lp).lagrangian
            rec.check("lagrangian-extension", ok, {**inputs, "l'": lp, "result": lag})
        _codim_checks(rec, space, w, inputs)

        # volume forms on Q^3 .. Q^6, independent of the configured space;
        # 20 trials cover every (m, d)
        m = 3 + trial % 4
        vol = MultisymplecticSpace.volume(m)
        d = 1 + (trial // 4) % (m - 1)
        wv = _random_subspace(m, d, rng, cfg.coeff_bound)
        vin = {"n": m, "W": wv}
        rec.check("volume-lagrangian", type_i_predicates(vol, wv, d).lagrangian, vin)
        rec.check("volume-lower-trivial",
                  all(type_i_complement(vol, wv, lp).is_zero() for lp in range(1, d)), vin)


def _decomposable_in_complement(space, w, grade, rng, bound, attempts=20):
    """A nonzero decomposable element of the Type-II span, built by solving for its last factor."""
    n = space.n
    tails = [Multivector.vector(b) for b in w.basis] or [Multivector.scalar(n)]
    for _ in range(attempts):
        heads = [random_vector(n, bound, rng) for _ in range(grade - 1)]
        head = decomposable(heads, n)
        if head.is_zero():
            continue
        if grade + 1 > space.degree or w.is_zero():
            sol = Subspace.full(n)
        else:
            sol = _solve_last_factor(space.omega, head, tails, None)
        for b in sol.basis:
            x = wedge(head, Multivector.vector(b))
            if not x.is_zero():
                return x
    if grade == 2 and space.cross_certificate:
        # u ^ (u x z) with z orthogonal to w and u orthogonal to z
        for z in orthogonal_complement(w, space.metric).basis:
            for u in orthogonal_complement(Subspace.span([z], n), space.metric).basis:
                x = decomposable([u, space.cross(u, z)], n)
                if not x.is_zero() and type_ii_complement(space, w, 2).contains_linear(x):
                    return x
    if 0 < w.dim <= grade:
        # products with every factor of w are annihilated by each further w
        extra = [random_vector(n, bound, rng) for _ in range(grade - w.dim)]
        x = decomposable(list(w.basis) + extra, n)
        if not x.is_zero() and type_ii_complement(space, w, grade).contains_linear(x):
            return x
    return None


def _suite_typeii_props(rec: _Recorder, cfg: SuiteConfig, space: MultisymplecticSpace, rng_for) -> None:
    n, k = space.n, space.k
    V, Z = Subspace.full(n), Subspace.zero(n)
    for trial in range(cfg.trials):
        rec.trial = trial
        rng = rng_for(trial)
        l = rng.randint(1, n)
        w = _random_subspace(n, rng.randint(0, n), rng, cfg.coeff_bound)
        u = _random_subspace(n, rng.randint(0, n), rng, cfg.coeff_bound)
        sub = _random_subspace_of(w, rng.randint(0, w.dim), rng) if w.dim else Z
        inputs = {"W": w, "U": u, "sub": sub, "l": l}
        span = lambda x, m: type_ii_complement(space, x, m).span

        rec.check("zero-complement", span(Z, l).is_full(), inputs)
        if l >= k + 1:
            rec.check("high-grade-full", span(w, l).is_full(), inputs)
        rec.check("monotone", span(sub, l).includes(span(w, l)), inputs)
        rec.check("sum-equality", span(u + w, l).equals(span(u, l) & span(w, l)), inputs)
        rec.check("type-i-agrees-at-1", span(w, 1).equals(type_i_complement(space, w, 1)), inputs)

        # semigroup: decomposable x in the span, any decomposable y
        l1 = rng.randint(1, max(1, n - 1))
        l2 = rng.randint(1, n - l1)
        x = _decomposable_in_complement(space, w, l1, rng, cfg.coeff_bound)
        vacuous = span(w, l1).is_zero() or (w.is_full() and l1 <= k and _nondegenerate(space, l1))
        if x is None and vacuous:
            rec.check("semigroup-vacuous", True)
        elif x is None:
            rec.check("semigroup", None)
        else:
            y = decomposable([random_vector(n, cfg.coeff_bound, rng) for _ in range(l2)], n)
            xy = wedge(x, y)
            rec.check("semigroup", type_ii_complement(space, w, l1 + l2).contains_linear(xy),
                      {**inputs, "l1": l1, "l2": l2})

        # inheritance
        li = rng.randint(1, k)
        iso = type_ii_isotropic(space, w, li)
        if iso:
            rec.check("isotropic-upward", all(type_ii_isotropic(space, w, m) for m in range(li, n + 1)), inputs)
            rec.check("isotropic-subspace", type_ii_isotropic(space, sub, li), inputs)
        rec.check("isotropic-above-dim",
                  all(type_ii_isotropic(space, w, m) for m in range(max(1, w.dim), n + 1)), inputs)
        co_sub = type_ii_coisotropic(space, sub, li, trials=40, seed=rng.random())
        if co_sub.status is Status.PROVEN:
            v = type_ii_coisotropic(space, w, li, trials=40, seed=rng.random())
            rec.check("coisotropic-superspace", None if v.status is Status.UNKNOWN else v.status is Status.PROVEN,
                      {**inputs, "l": li}, "proven", v.status)
        co_w = type_ii_coisotropic(space, w, li, trials=40, seed=rng.random())
        if co_w.status is Status.PROVEN and li > 1:
            lower = rng.randint(1, li - 1)
            v = type_ii_coisotropic(space, w, lower, trials=40, seed=rng.random())
            rec.check("coisotropic-downward", None if v.status is Status.UNKNOWN else v.status is Status.PROVEN,
                      {**inputs, "l": li, "l''": lower}, "proven", v.status)

        # volume forms: W is Type-II dim(W)-Lagrangian, lower complements are trivial
        m = 3 + trial % 4
        vol = MultisymplecticSpace.volume(m)
        d = rng.randint(1, m)
        wv = _random_subspace(m, d, rng, cfg.coeff_bound)
        vin = {"n": m, "W": wv}
        rec.check("volume-typeii-lagrangian",
                  type_ii_complement(vol, wv, d).span.equals(exterior_power(wv, d)), vin)
        rec.check("volume-typeii-lower-trivial",
                  all(type_ii_complement(vol, wv, lp).span.is_zero() for lp in range(1, d)), vin)

        _codim_checks(rec, space, w, inputs)


def _suite_g2_identities(rec: _Recorder, cfg: SuiteConfig, space, rng_for) -> None:
    g2 = _g2()
    n = 7
    rec.trial = -1
    rec.check("metric-is-identity", metric_from_phi(g2.phi, standard_volume()) == Matrix.identity(7))
    basis = Subspace.full(n).basis
    from .exterior import contract
    hooks = [contract(Multivector.basis(n, [i]), g2.phi) for i in range(1, n + 1)]
    for i in range(n):
        for j in range(i, n):
            lhs = wedge(wedge(hooks[i], hooks[j]), g2.phi)
            rec.check("metric-identity-pair", lhs == g2.volume * (6 * g2.metric[i, j]), {"pair": [i + 1, j + 1]})
    for trial in range(cfg.trials):
        rec.trial = trial
        rng = rng_for(trial)
        u, v, w = (random_vector(n, cfg.coeff_bound, rng) for _ in range(3))
        uv = g2.cross(u, v)
        inputs = {"u": u, "v": v, "w": w}
        rec.check("compatibility", inner(g2, uv, w) == eval_form(g2.phi, [u, v, w]), inputs)
        rec.check("orthogonality", inner(g2, uv, u) == 0 == inner(g2, uv, v), inputs)
        rec.check("antisymmetry", g2.cross(v, u) == tuple(-c for c in uv), inputs)
        rec.check("double-cross", check_cross_identity(g2, u, v), inputs)
        norm = inner(g2, uv, uv)
        gram = inner(g2, u, u) * inner(g2, v, v) - inner(g2, u, v) ** 2
        rec.check("norm-identity", norm == gram, inputs)


_THEOREM_KINDS = {
    1: (("structured-1",), ("generic-1",)),
    2: (("structured-2",), ("generic-2",)),
    3: (("cross-closed-3", "isotropic-3"), ("generic-3",)),
    4: (("assoc-containing-4", "coassociative-4"), ("generic-4",)),
    5: (("dim5",), ("generic-5",)),
    6: (("dim6",), ("generic-6",)),
}


def _suite_theorem1(rec: _Recorder, cfg: SuiteConfig, space, rng_for) -> None:
    g2 = _g2()
    index = 0
    for dim, (structured, generic) in _THEOREM_KINDS.items():
        for kind in structured + generic:
            for trial in range(cfg.trials):
                rec.trial = index
                index += 1
                w = make_special_subspace(kind, rng_for(index), g2)
                report = classify_g2_subspace(g2, w, trials=100, seed=index)
                name = f"dim{dim}:{kind}"
                unknown = any(s is Status.UNKNOWN for s in report.predicate_values().values())
                if report.discrepancies:
                    rec.check(name, False, {"W": w, "kind": kind}, report.branch, list(report.discrepancies))
                else:
                    rec.check(name, None if unknown else True)
                if report.associative_witness is not None:
                    rec.check("witness-associative", is_associative(g2, report.associative_witness)
                              and w.includes(report.associative_witness), {"W": w})


def _suite_corollaries(rec: _Recorder, cfg: SuiteConfig, space, rng_for) -> None:
    g2 = _g2()
    index = 0
    for kind in ("cross-closed-3", "generic-3", "coassociative-4", "generic-4"):
        for trial in range(cfg.trials):
            rec.trial = index
            index += 1
            w = make_special_subspace(kind, rng_for(index), g2)
            rec.check(f"corollary:{kind}", corollary_check(g2, w, trials=100, seed=index), {"W": w})


SUITES: dict[str, Callable] = {
    "typeI-prop31": _suite_typei_prop31,
    "typeI-prop34": _suite_typei_prop34,
    "typeII-props": _suite_typeii_props,
    "g2-identities": _suite_g2_identities,
    "theorem1": _suite_theorem1,
    "corollaries": _suite_corollaries,
}


def run_suite(config: SuiteConfig) -> SuiteReport:
    if config.suite_name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {config.suite_name!r}; choose from {sorted(SUITES)}")
    rec = _Recorder(config.suite_name)
    start = time.perf_counter()
    space = config.space()
    SUITES[config.suite_name](rec, config, space,
                              lambda trial: _trial_rng(config.seed, config.suite_name, trial))
    report = rec.report
    report.failures.sort(key=lambda f: f["trial"])
    report.checks = {k: dict(v) for k, v in sorted(rec.counts.items())}
    report.config = {"trials": config.trials, "seed": config.seed,
                     "coeff_bound": config.coeff_bound, "form": config.form_label()}
    report.wall_time = time.perf_counter() - start
    return report


def iter_reports(configs) -> Iterator[SuiteReport]:
    for c in configs:
        yield run_suite(c)
