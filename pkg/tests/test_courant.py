import random
from fractions import Fraction

import pytest

from tdual.courant import (
    EquivariantContext,
    GeneralizedSection,
    bracket_swap,
    check_phi_intertwines,
    clifford,
    derived_bracket_check,
    dorfman,
    fiber_inversion,
    hori_forms,
    pairing,
    phi_swap,
    project_section,
    random_form,
    random_section,
    run_context_checks,
    section_is_invariant,
    standard_contexts,
    twisted_d,
)
from tdual.fourier import Form, FourierScalar, GaussQ, VectorField, form_primitive

CD = 3


def flat_context():
    return EquivariantContext(2, ((1, 0), (0, 1)), (1, 0),
                              Form.zero(CD), Form.zero(CD), Form.zero(CD))


def flux_context():
    return standard_contexts()[0][1]


def curved_context():
    return standard_contexts()[1][1]


# ---------------------------------------------------------------------------
# Exact scalar and form calculus
# ---------------------------------------------------------------------------

def test_scalar_arithmetic_and_derivative():
    f = FourierScalar.cos_wave((1, 0))
    assert (f.partial(0) + FourierScalar.sin_wave((1, 0))).is_zero()
    g = FourierScalar.sin_wave((0, 2))
    assert (g.partial(1) - FourierScalar.cos_wave((0, 2), 2)).is_zero()
    assert ((f * g) - (g * f)).is_zero()


def test_reality_enforced():
    with pytest.raises(ValueError):
        FourierScalar(2, (((1, 0), GaussQ.of(1, 1)),))


def test_form_calculus():
    rng = random.Random(0)
    ctx = curved_context()
    for deg in (0, 1, 2):
        w = random_form(rng, ctx, deg, invariant=False)
        assert w.d().d().is_zero()
    a = Form.dx(CD, 0, FourierScalar.cos_wave((1, 1)))
    b = Form.dx(CD, 1, FourierScalar.sin_wave((2, 0)))
    assert (a.wedge(b) + b.wedge(a)).is_zero()


def test_form_primitive():
    fl = Form.dx(CD, 0, FourierScalar.sin_wave((1, 0))).wedge(Form.dx(CD, 1))
    pr = form_primitive(fl)
    assert (pr.d() - fl).is_zero()
    with pytest.raises(ValueError):
        form_primitive(Form.dx(CD, 0).wedge(Form.dx(CD, 1)))  # constant mode


def test_context_validation():
    with pytest.raises(ValueError):
        # non-involutive deck
        EquivariantContext(2, ((1, 1), (0, 1)), (0, 0),
                           Form.zero(CD), Form.zero(CD), Form.zero(CD))
    with pytest.raises(ValueError):
        # invariant (not anti-invariant) potential
        bad = Form.dx(CD, 0, FourierScalar.cos_wave((2, 0)))
        EquivariantContext(2, ((1, 0), (0, 1)), (1, 0),
                           bad, Form.zero(CD), Form.zero(CD))


def test_context_json_round_trip():
    ctx = curved_context()
    obj = ctx.to_json_dict()
    back = EquivariantContext.from_json_dict(obj)
    assert back.deck_a == ctx.deck_a and back.deck_two_b == ctx.deck_two_b
    assert (back.a - ctx.a).is_zero()
    # the primitive may differ by a closed anti-invariant form, but the
    # flux must reproduce exactly
    assert (back.flux_fhat() - ctx.flux_fhat()).is_zero()
    assert (back.h3 - ctx.h3).is_zero()


# ---------------------------------------------------------------------------
# Bracket basics
# ---------------------------------------------------------------------------

def test_coordinate_fields_commute_flat():
    ctx = flat_context()
    s1 = GeneralizedSection(VectorField.coordinate(CD, 0), Form.zero(CD))
    s2 = GeneralizedSection(VectorField.coordinate(CD, 1), Form.zero(CD))
    assert dorfman(s1, s2, ctx).is_zero()


def test_flux_term_of_the_bracket():
    # with H carrying a dx^dy^dtheta component the bracket of the two base
    # coordinate fields produces its double contraction
    ctx = flux_context()
    s1 = GeneralizedSection(VectorField.coordinate(CD, 0), Form.zero(CD))
    s2 = GeneralizedSection(VectorField.coordinate(CD, 1), Form.zero(CD))
    br = dorfman(s1, s2, ctx)
    assert all(c.is_zero() for c in br.vec.components)
    expect = ctx.flux_h().interior(s1.vec).interior(s2.vec)
    assert (br.form - expect).is_zero()


def test_bracket_function_linearity_axiom():
    ctx = curved_context()
    rng = random.Random(1)
    for _ in range(4):
        a = random_section(rng, ctx)
        b = random_section(rng, ctx)
        f = FourierScalar.cos_wave((2, 0), 1) + FourierScalar.const(2, 2)
        lhs = dorfman(a, b.scale(f), ctx)
        rhs = b.scale(a.vec.apply(f)) + dorfman(a, b, ctx).scale(f)
        assert (lhs - rhs).is_zero()


def test_sections_project_to_invariant():
    ctx = curved_context()
    rng = random.Random(2)
    for _ in range(4):
        s = random_section(rng, ctx)
        assert section_is_invariant(s, ctx)
        assert section_is_invariant(dorfman(s, s, ctx), ctx)


# ---------------------------------------------------------------------------
# Clifford action and twisted differential
# ---------------------------------------------------------------------------

def test_clifford_basics():
    one = Form.one(CD)
    sx = GeneralizedSection(VectorField.zero(CD), Form.dx(CD, 0))
    assert (clifford(sx, one) - Form.dx(CD, 0)).is_zero()
    sv = GeneralizedSection(VectorField.coordinate(CD, 0), Form.zero(CD))
    wxy = Form.dx(CD, 0).wedge(Form.dx(CD, 1))
    assert (clifford(sv, wxy) - Form.dx(CD, 1)).is_zero()


def test_clifford_relation():
    ctx = curved_context()
    rng = random.Random(3)
    for deg in (0, 1, 2):
        u, v = random_section(rng, ctx), random_section(rng, ctx)
        w = random_form(rng, ctx, deg)
        lhs = clifford(u, clifford(v, w)) + clifford(v, clifford(u, w))
        assert (lhs - w.scale(pairing(u, v).scale(2))).is_zero()


def test_twisted_d_on_one_is_flux():
    ctx = flux_context()
    assert (twisted_d(Form.one(CD), ctx) - ctx.flux_h()).is_zero()


def test_twisted_d_squares_to_zero():
    ctx = curved_context()
    rng = random.Random(4)
    for deg in (0, 1):
        w = random_form(rng, ctx, deg)
        assert twisted_d(twisted_d(w, ctx), ctx).is_zero()


def test_twisted_d_of_connection():
    # d_H(A) = F + A ^ Fhat when the base 3-form vanishes
    ctx = curved_context()
    a_conn = ctx.connection()
    lhs = twisted_d(a_conn, ctx)
    rhs = ctx.curvature() + a_conn.wedge(ctx.flux_fhat()).scale_rat(-1) \
        + ctx.flux_h().wedge(a_conn) + a_conn.wedge(ctx.flux_fhat())
    # directly: dA + H ^ A where dA = F and H ^ A = (A ^ Fhat) ^ A
    direct = ctx.curvature() + ctx.flux_h().wedge(a_conn)
    assert (lhs - direct).is_zero()


def test_derived_bracket_identity():
    for _, ctx in standard_contexts()[:2]:
        rng = random.Random(5)
        for deg in (0, 1, 2):
            s1, s2 = random_section(rng, ctx), random_section(rng, ctx)
            w = random_form(rng, ctx, deg)
            assert derived_bracket_check(s1, s2, w, ctx)


def test_derived_bracket_trivial_cases():
    ctx = flat_context()
    s1 = GeneralizedSection(VectorField.coordinate(CD, 0), Form.zero(CD))
    s2 = GeneralizedSection(VectorField.coordinate(CD, 1), Form.dx(CD, 0))
    assert derived_bracket_check(s1, s2, Form.one(CD), ctx)


# ---------------------------------------------------------------------------
# Swap and transform
# ---------------------------------------------------------------------------

def test_phi_swap_defining_example():
    ctx = curved_context()
    s = GeneralizedSection(VectorField.coordinate(CD, 2), Form.zero(CD))
    out = phi_swap(s, ctx)
    assert all(c.is_zero() for c in out.vec.components)
    assert (out.form - ctx.dual().connection()).is_zero()


def test_phi_swap_fixes_balanced_sections():
    ctx = flat_context()
    f = FourierScalar.cos_wave((1, 1))
    s = GeneralizedSection(VectorField.coordinate(CD, 2, f), Form.dx(CD, 2, f))
    out = phi_swap(s, ctx)
    assert (out - s).is_zero()


def test_phi_swap_involution_and_pairing():
    ctx = curved_context()
    rng = random.Random(6)
    for _ in range(4):
        s, t = random_section(rng, ctx), random_section(rng, ctx)
        assert (phi_swap(phi_swap(s, ctx), ctx.dual()) - s).is_zero()
        assert (pairing(phi_swap(s, ctx), phi_swap(t, ctx)) - pairing(s, t)).is_zero()


def test_bracket_swap_intertwines():
    for _, ctx in standard_contexts()[:3]:
        rng = random.Random(7)
        for _ in range(3):
            s1, s2 = random_section(rng, ctx), random_section(rng, ctx)
            assert check_phi_intertwines(s1, s2, ctx)


def test_bracket_swap_intertwines_flat_case():
    ctx = flat_context()
    rng = random.Random(12)
    for _ in range(3):
        s1, s2 = random_section(rng, ctx), random_section(rng, ctx)
        assert check_phi_intertwines(s1, s2, ctx)


def test_bracket_swap_scaling_compatibility():
    ctx = curved_context()
    rng = random.Random(8)
    s1, s2 = random_section(rng, ctx), random_section(rng, ctx)
    f = FourierScalar.cos_wave((2, 0)) + FourierScalar.const(2, 1)
    lhs = bracket_swap(dorfman(s1, s2.scale(f), ctx), ctx)
    rhs = dorfman(bracket_swap(s1, ctx), bracket_swap(s2, ctx).scale(f), ctx, hat=True)
    assert (lhs - rhs).is_zero()


def test_hori_forms_trivial_values():
    ctx = curved_context()
    assert (hori_forms(Form.one(CD), ctx) + ctx.dual().connection()).is_zero()
    assert (hori_forms(ctx.connection(), ctx) - Form.one(CD)).is_zero()


def test_hori_clifford_anticommutation():
    ctx = curved_context()
    rng = random.Random(9)
    for deg in (0, 1, 2):
        s = random_section(rng, ctx)
        w = random_form(rng, ctx, deg)
        lhs = hori_forms(clifford(s, w), ctx)
        rhs = clifford(phi_swap(s, ctx), hori_forms(w, ctx)).scale_rat(-1)
        assert (lhs - rhs).is_zero()


def test_hori_twisted_d_anticommutation():
    for _, ctx in standard_contexts()[:2]:
        rng = random.Random(10)
        for deg in (0, 1, 2):
            w = random_form(rng, ctx, deg)
            lhs = hori_forms(twisted_d(w, ctx, "E"), ctx)
            rhs = twisted_d(hori_forms(w, ctx), ctx, "Ehat").scale_rat(-1)
            assert (lhs - rhs).is_zero()


def test_hori_round_trip_is_minus_identity():
    ctx = curved_context()
    rng = random.Random(11)
    for deg in (0, 1, 2, 3):
        w = random_form(rng, ctx, deg)
        assert (hori_forms(hori_forms(w, ctx), ctx.dual()) + w).is_zero()


def test_full_context_reports():
    for name, ctx in standard_contexts()[:2]:
        rep = run_context_checks(ctx, sections=3, seed=13, label=name)
        assert rep.ok, str(rep)
