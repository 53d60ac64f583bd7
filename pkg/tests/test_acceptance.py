"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete.
"""

import random
import time
from itertools import product

import pytest

from tdual.bundles import same_bundle, total_duality_report
from tdual.catalog import build_bundle, build_flux, circle, crosscap_sum, sigma
from tdual.complexes import TwistedCochain, coboundary, cohomology, cup
from tdual.courant import (
    anchor_d,
    check_phi_intertwines,
    clifford,
    derived_bracket_check,
    dorfman,
    hori_forms,
    pairing,
    phi_swap,
    random_form,
    random_section,
    standard_contexts,
    twisted_d,
)
from tdual.exactalg import (
    FGAbelianGroup as FG,
    IntMatrix,
    NoSolution,
    PresentedGroup,
    determinant,
    normal_form,
    smith_normal_form,
    solve_integer,
)
from tdual.fixtures import (
    crosscap_base_fixtures,
    crosscap_h1_fixture,
    crosscap_k_fixtures,
    crosscap_total_fixtures,
    klein_fixtures,
    sigma_base_fixtures,
    sigma_k_fixtures,
    sigma_total_fixtures,
)
from tdual.fourier import Form, VectorField
from tdual.ktheory import TwistClass, ahss_k_groups, rational_consistency, resolve_by_tduality
from tdual.pipeline import run_fixtures
from tdual.tduality import (
    construct_tdual,
    duals_equivalent,
    small_twisted_cohomology,
    verify_tduality,
)

SIGMA_RANGE = [(g, j, k) for g in (1, 2, 3) for j in (0, 1) for k in (0, 1)]
CROSSCAP_RANGE = [(n, j, k) for n in (1, 2, 3)
                  for j in (0, 1, 2, 3) for k in (0, 1, 2, 3)]


def _report(num: int, label: str, ok: bool, elapsed: float) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"\n[acceptance] criterion {num} ({label}): {status}  [{elapsed:.2f}s]")


def _all_pairs():
    yield ("klein", 0, 0, 0, build_flux(build_bundle(circle(), circle().xi(), 0), 0))
    for g, j, k in SIGMA_RANGE:
        info = sigma(g)
        yield ("sigma", g, j, k, build_flux(build_bundle(info, info.xi(), j), k))
    for n, j, k in CROSSCAP_RANGE:
        info = crosscap_sum(n)
        yield ("crosscap", n, j, k, build_flux(build_bundle(info, info.xi(), j), k))


def test_criterion_1_klein_bottle_tables():
    t0 = time.perf_counter()
    ok = False
    try:
        results = run_fixtures(klein_fixtures())
        assert all(r.ok for r in results), \
            [r.fixture.label() for r in results if not r.ok]
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0, f"took {elapsed:.2f}s, budget 1s"
        ok = True
    finally:
        _report(1, "Klein bottle tables", ok, time.perf_counter() - t0)


def test_criterion_2_oriented_base_tables():
    t0 = time.perf_counter()
    ok = False
    try:
        fixtures = []
        for g in (1, 2, 3):
            fixtures += sigma_base_fixtures(g)
            for j in (0, 1):
                fixtures += sigma_total_fixtures(g, j)
            for j, k in product((0, 1), (0, 1)):
                fixtures += sigma_k_fixtures(g, j, k)
        results = run_fixtures(fixtures)
        assert all(r.ok for r in results), \
            [r.fixture.label() for r in results if not r.ok]
        elapsed = time.perf_counter() - t0
        assert elapsed < 10.0, f"took {elapsed:.2f}s, budget 10s"
        ok = True
    finally:
        _report(2, "genus-g bundle tables incl. resolved entries", ok,
                time.perf_counter() - t0)


def test_criterion_3_crosscap_base_tables():
    t0 = time.perf_counter()
    ok = False
    try:
        fixtures = []
        for n in (1, 2, 3):
            fixtures += crosscap_base_fixtures(n)
            for j in (0, 1, 2, 3):
                fixtures += crosscap_total_fixtures(n, j)
                fixtures.append(crosscap_h1_fixture(n, j))
                for k in (0, 1, 2, 3):
                    fixtures += crosscap_k_fixtures(n, j, k)
        results = run_fixtures(fixtures)
        assert all(r.ok for r in results), \
            [r.fixture.label() for r in results if not r.ok]
        elapsed = time.perf_counter() - t0
        assert elapsed < 30.0, f"took {elapsed:.2f}s, budget 30s"
        ok = True
    finally:
        _report(3, "crosscap-base bundle tables incl. torsion split", ok,
                time.perf_counter() - t0)


def test_criterion_4_duality_round_trips():
    t0 = time.perf_counter()
    ok = False
    try:
        from tdual.tduality import CorrespondenceComplex

        for label, param, j, k, pair in _all_pairs():
            dual, cert = construct_tdual(pair)
            rep = verify_tduality(pair, dual)
            assert rep.ok, (label, param, j, k, str(rep))
            corr = CorrespondenceComplex(pair.bundle, dual.bundle)
            lhs = corr.p_pull(pair.total_cochain()) - corr.phat_pull(dual.total_cochain())
            assert (lhs - corr.coboundary(cert.b)).is_zero(), (label, param, j, k)
            ddual, _ = construct_tdual(dual)
            assert same_bundle(ddual.bundle, pair.bundle), (label, param, j, k)
            eq, _ = duals_equivalent(pair, ddual)
            assert eq, (label, param, j, k)
        ok = True
    finally:
        _report(4, "duality axioms, certificates and round trips", ok,
                time.perf_counter() - t0)


def test_criterion_5_h1_oracle():
    t0 = time.perf_counter()
    ok = False
    try:
        from tdual.bundles import total_homology

        for n in (1, 2, 3):
            info = crosscap_sum(n)
            for j in range(5):
                b = build_bundle(info, info.xi(), j)
                rel = IntMatrix.from_rows([[2] * n + [-j], [0] * n + [2]], cols=n + 1)
                oracle = normal_form(PresentedGroup(n + 1, rel))
                model_h1 = total_homology(b)[1]
                assert model_h1 == oracle, (n, j, str(model_h1), str(oracle))
                if j % 2 == 1:
                    assert oracle == FG(n - 1, (4,))
        ok = True
    finally:
        _report(5, "fundamental-group abelianization oracle", ok,
                time.perf_counter() - t0)


def test_criterion_6_poincare_duality_total_models():
    t0 = time.perf_counter()
    ok = False
    try:
        cases = [(sigma(g), j) for g in (1, 2, 3) for j in (0, 1)]
        cases += [(crosscap_sum(n), j) for n in (1, 2, 3) for j in (0, 1, 2, 3)]
        for info, j in cases:
            b = build_bundle(info, info.xi(), j)
            rep = total_duality_report(b, info.orientation_system(),
                                       systems=[("Z", None), ("xi", info.xi())])
            assert rep.ok, (info.name, j, str(rep))
        ok = True
    finally:
        _report(6, "Poincare duality on 3-dimensional total models", ok,
                time.perf_counter() - t0)


def test_criterion_7_rank_consistency():
    t0 = time.perf_counter()
    ok = False
    try:
        for label, param, j, k, pair in _all_pairs():
            dual, _ = construct_tdual(pair)
            kg = ahss_k_groups(TwistClass.from_flux(pair, False))
            if not kg.resolved:
                kg = resolve_by_tduality(
                    kg, ahss_k_groups(TwistClass.from_flux(dual, True)))
            assert rational_consistency(kg, small_twisted_cohomology(pair, False)).ok, \
                (label, param, j, k)
            kgx = ahss_k_groups(TwistClass.from_flux(pair, True))
            if not kgx.resolved:
                kgx = resolve_by_tduality(
                    kgx, ahss_k_groups(TwistClass.from_flux(dual, False)))
            assert rational_consistency(kgx, small_twisted_cohomology(pair, True)).ok, \
                (label, param, j, k)
        ok = True
    finally:
        _report(7, "K-group ranks vs twisted dimensions", ok,
                time.perf_counter() - t0)


def test_criterion_8_symbolic_bracket_and_transform_suite():
    t0 = time.perf_counter()
    ok = False
    try:
        contexts = standard_contexts()
        assert len(contexts) >= 3
        assert any(ctx.deck_a == ((1, 0), (0, 1)) and ctx.deck_two_b == (1, 0)
                   and not ctx.flux_fhat().is_zero() for _, ctx in contexts)
        rng = random.Random(29)
        total_sections = 0
        for name, ctx in contexts:
            triples = [tuple(random_section(rng, ctx) for _ in range(3))
                       for _ in range(5)]
            total_sections += 15
            fns = [f + f.compose_affine(ctx.deck_a, ctx.deck_two_b)
                   for f in (random_form(rng, ctx, 0).component(()) for _ in range(5))]
            forms = [random_form(rng, ctx, deg) for deg in (0, 1, 2)]
            cd = ctx.cover_dim
            for (a, b, c), f in zip(triples, fns):
                # the five bracket axioms
                assert (dorfman(a, dorfman(b, c, ctx), ctx)
                        - dorfman(dorfman(a, b, ctx), c, ctx)
                        - dorfman(b, dorfman(a, c, ctx), ctx)).is_zero(), name
                assert all((u - v).is_zero() for u, v in
                           zip(dorfman(a, b, ctx).vec.components,
                               a.vec.lie_bracket(b.vec).components)), name
                lhs = dorfman(a, b.scale(f), ctx)
                rhs = b.scale(a.vec.apply(f)) + dorfman(a, b, ctx).scale(f)
                assert (lhs - rhs).is_zero(), name
                sym = dorfman(a, b, ctx) + dorfman(b, a, ctx)
                assert (sym - anchor_d(pairing(a, b).scale(2), cd)).is_zero(), name
                lhs5 = a.vec.apply(pairing(b, c))
                rhs5 = pairing(dorfman(a, b, ctx), c) + pairing(b, dorfman(a, c, ctx))
                assert (lhs5 - rhs5).is_zero(), name
            for (a, b, _), w in zip(triples, forms * 2):
                assert derived_bracket_check(a, b, w, ctx), name
                assert check_phi_intertwines(a, b, ctx), name
                lhs = hori_forms(clifford(a, w), ctx)
                rhs = clifford(phi_swap(a, ctx), hori_forms(w, ctx)).scale_rat(-1)
                assert (lhs - rhs).is_zero(), name
                lhs = hori_forms(twisted_d(w, ctx, "E"), ctx)
                rhs = twisted_d(hori_forms(w, ctx), ctx, "Ehat").scale_rat(-1)
                assert (lhs - rhs).is_zero(), name
                assert (hori_forms(hori_forms(w, ctx), ctx.dual()) + w).is_zero(), name
        assert total_sections >= 50
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"took {elapsed:.2f}s, budget 60s"
        ok = True
    finally:
        _report(8, "symbolic bracket and transform identities", ok,
                time.perf_counter() - t0)


def test_criterion_9_algebra_property_suite():
    t0 = time.perf_counter()
    ok = False
    try:
        rng = random.Random(1009)
        # Smith normal form on 1000 random matrices
        for trial in range(1000):
            rows = rng.randint(1, 30)
            cols = rng.randint(1, 30)
            a = IntMatrix.from_rows(
                [[rng.randint(-50, 50) for _ in range(cols)] for _ in range(rows)],
                cols=cols)
            u, d, v = smith_normal_form(a)
            assert u.mul(d).mul(v) == a
            assert abs(determinant(u)) == 1
            assert abs(determinant(v)) == 1
            diag = d.diagonal()
            assert all(x >= 0 for x in diag)
            nz = [x for x in diag if x]
            assert all(q % p == 0 for p, q in zip(nz, nz[1:]))
        # solve_integer against bounded brute force
        from itertools import product as iproduct

        for trial in range(120):
            rows = rng.randint(1, 3)
            cols = rng.randint(1, 3)
            a = IntMatrix.from_rows(
                [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)],
                cols=cols)
            b = [rng.randint(-4, 4) for _ in range(rows)]
            brute = any(a.mul_vec(x) == tuple(b)
                        for x in iproduct(range(-12, 13), repeat=cols))
            try:
                x = solve_integer(a, b)
                assert a.mul_vec(x) == tuple(b)
                got = True
            except NoSolution:
                got = False
            assert got == brute
        # delta^2 = 0 and the cup Leibniz rule over every catalog space
        spaces = [circle(), sigma(1), sigma(2), sigma(3),
                  crosscap_sum(1), crosscap_sum(2), crosscap_sum(3)]
        for info in spaces:
            x = info.complex
            for system in (None, info.xi()):
                for k in range(x.dimension):
                    c = TwistedCochain(
                        x, k, tuple(rng.randint(-4, 4) for _ in range(x.count(k))),
                        system)
                    assert coboundary(coboundary(c)).is_zero()
            if x.dimension < 2:
                continue
            xi = info.xi()
            for s1, s2 in [(None, None), (xi, xi), (xi, None), (None, xi)]:
                for p, q in [(0, 1), (1, 0), (1, 1)]:
                    a = TwistedCochain(
                        x, p, tuple(rng.randint(-4, 4) for _ in range(x.count(p))), s1)
                    b = TwistedCochain(
                        x, q, tuple(rng.randint(-4, 4) for _ in range(x.count(q))), s2)
                    lhs = coboundary(cup(a, b))
                    rhs = cup(coboundary(a), b) + cup(a, coboundary(b)).scale(
                        -1 if p % 2 else 1)
                    assert (lhs - rhs).is_zero(), (info.name, p, q)
        ok = True
    finally:
        _report(9, "exact linear algebra and cochain property suite", ok,
                time.perf_counter() - t0)
