from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from celint.chow import (
    ChowClass,
    ChowRing,
    PushForwardMap,
    degree_of_class,
    identity_map,
    parse_class,
    proper_transform,
    ring_blowup_point,
    ring_literal,
    ring_point,
    ring_product,
    ring_projective,
)
from celint.errors import (
    DivisionByZero,
    NotADivisor,
    ParseError,
    PresentationError,
    RingMismatch,
    UnsupportedCatalog,
)
from celint.exactnum import rf
from celint.exprparse import parse_rf

P2 = ring_projective(2)
P3 = ring_projective(3)
RF_M = parse_rf("m")


def test_point_ring():
    pt = ring_point()
    assert pt.dim == 0
    assert pt.one().degree() == rf(1)
    assert pt.require_tangent_chern() == pt.one()


def test_projective_space_presentation():
    assert P2.all_names == ("[V]", "h", "h^2")
    assert P2.point == "h^2"
    h = P2.basis_class("h")
    assert (h * h).degree() == rf(1)
    assert (h ** 3).is_zero()
    # c(TP^n) = (1+h)^(n+1) truncated
    assert P2.require_tangent_chern() == parse_class("1 + 3*h + 3*h^2", P2)
    assert P3.require_tangent_chern() == parse_class(
        "1 + 4*h + 6*h^2 + 4*h^3", P3
    )


def test_projective_line_and_degree():
    p1 = ring_projective(1)
    h = p1.basis_class("h")
    assert h.degree() == rf(1)
    assert degree_of_class(p1.one()) == rf(0)


def test_product_ring_basis_order():
    q = ring_product(ring_projective(1), ring_projective(1))
    # within each codimension the first-factor power comes first
    assert q.basis == (("[V]",), ("h1", "h2"), ("h1*h2",))
    h1 = q.basis_class("h1")
    h2 = q.basis_class("h2")
    assert (h1 * h1).is_zero()
    assert (h1 * h2).degree() == rf(1)
    assert q.require_tangent_chern() == parse_class(
        "1 + 2*h1 + 2*h2 + 4*h1*h2", q
    )


def test_product_ring_mixed_dims():
    q = ring_product(P2, ring_projective(1))
    assert q.basis[1] == ("h1", "h2")
    assert q.basis[2] == ("h1^2", "h1*h2")
    assert q.basis[3] == ("h1^2*h2",)
    top = q.basis_class("h1") ** 2 * q.basis_class("h2")
    assert top.degree() == rf(1)


def test_product_ring_rejects_non_projective():
    bl, _, _ = ring_blowup_point(P2)
    with pytest.raises(UnsupportedCatalog):
        ring_product(bl, P2)


def test_blowup_point_surface():
    bl, down, e = ring_blowup_point(P2)
    assert (e * e).degree() == rf(-1)
    h = bl.basis_class("h")
    assert (h * e).is_zero()
    assert down.push(e).is_zero()
    assert down.pull(P2.basis_class("h")) == h
    # c(T Bl_p P^2) = 1 + (3h - e) + chi(Bl_p P^2) pt
    assert bl.require_tangent_chern() == parse_class("1 + 3*h - e1 + 4*h^2", bl)
    assert bl.require_tangent_chern().degree() == rf(4)


def test_blowup_point_threefold():
    bl, down, e = ring_blowup_point(P3)
    assert (e ** 3).degree() == rf(1)
    assert (e ** 2 * bl.basis_class("h")).is_zero()
    assert down.push(e ** 2).is_zero()
    # Euler characteristic gains chi(P^2) - 1 = 2
    assert bl.require_tangent_chern().degree() == rf(6)


def test_blowup_iterated_names_and_orthogonality():
    bl1, _, e1 = ring_blowup_point(P2)
    bl2, down2, e2 = ring_blowup_point(bl1)
    assert "e2" in bl2.codim_of
    lifted_e1 = bl2.basis_class("e1")
    assert (lifted_e1 * e2).is_zero()
    assert (e2 * e2).degree() == rf(-1)
    assert down2.push(lifted_e1) == e1


def test_blowup_requires_point():
    spec = {
        "dim": 1,
        "basis": [["[C]"], ["p"]],
        "products": {},
        "degree": {"p": 1},
    }
    ring = ring_literal(spec)
    assert ring.point is None
    with pytest.raises(UnsupportedCatalog):
        ring_blowup_point(ring)


def test_class_arithmetic_and_grading():
    h = P2.basis_class("h")
    c = P2.one() + h.scale(rf(2)) + (h * h).scale(rf(5))
    assert c.graded_piece(1) == h.scale(rf(2))
    assert c.positive_part() == c - P2.one()
    assert c.coefficient("h^2") == rf(5)
    assert (-c) + c == P2.zero()
    assert c.is_pure_codim(0) is False
    assert h.is_pure_codim(1)


def test_class_inverse_geometric_series():
    c = parse_class("1 + h", P2)
    assert c.inverse() == parse_class("1 - h + h^2", P2)
    assert c * c.inverse() == P2.one()
    assert (P2.one().scale(rf(2))).inverse() == P2.one().scale(rf(Fraction(1, 2)))
    with pytest.raises(DivisionByZero):
        P2.basis_class("h").inverse()


def test_class_division():
    num = parse_class("1 + 3*h + 3*h^2", P2)
    den = parse_class("1 + h", P2)
    assert num / den == parse_class("1 + 2*h + h^2", P2)


def test_class_symbolic_coefficients():
    h = P2.basis_class("h")
    c = P2.one() + h.scale(RF_M)
    inv = c.inverse()
    assert inv.coefficient("h") == -RF_M
    assert inv.coefficient("h^2") == RF_M * RF_M
    at2 = c.evaluate(Fraction(2))
    assert at2 == parse_class("1 + 2*h", P2)


def test_class_equality_hash():
    h = P2.basis_class("h")
    assert hash(h + h) == hash(h.scale(rf(2)))
    assert (h + h) == h.scale(rf(2))
    assert h != P2.one()


def test_ring_mismatch_rejected():
    with pytest.raises(RingMismatch):
        P2.basis_class("h") + P3.basis_class("h")
    other = ring_projective(2)
    with pytest.raises(RingMismatch):
        P2.basis_class("h") * other.basis_class("h")


def test_parse_render_round_trip():
    texts = [
        "[V] + (5/2)*h + 2*h^2",
        "h - h^2",
        "0",
        "(3*m)/(1 + m)*h",
    ]
    for text in texts:
        c = parse_class(text, P2)
        assert parse_class(c.render(), P2) == c


def test_render_follows_basis_order():
    c = parse_class("h^2 + h + 1", P2)
    assert c.render() == "[V] + h + h^2"
    assert P2.zero().render() == "0"


def test_parse_unknown_name():
    with pytest.raises(ParseError):
        parse_class("1 + x", P2)


def test_literal_ring_validation_failures():
    good = {
        "dim": 2,
        "basis": [["[V]"], ["h"], ["p"]],
        "products": {"h,h": "p"},
        "degree": {"p": 1},
        "point": "p",
    }
    ring_literal(good)

    bad_grading = dict(good, products={"h,h": "h"})
    with pytest.raises(PresentationError):
        ring_literal(bad_grading)

    missing_degree = dict(good, degree={})
    with pytest.raises(PresentationError):
        ring_literal(missing_degree)

    unknown_name = dict(good, products={"h,q": "p"})
    with pytest.raises(PresentationError):
        ring_literal(unknown_name)

    bad_unit = dict(good, products={"[V],h": "2*h"})
    with pytest.raises(PresentationError):
        ring_literal(bad_unit)

    bad_levels = dict(good, basis=[["[V]"], ["h"]])
    with pytest.raises(PresentationError):
        ring_literal(bad_levels)

    duplicate = dict(good, basis=[["[V]"], ["h"], ["h"]])
    with pytest.raises(PresentationError):
        ring_literal(duplicate)


def test_literal_ring_associativity_check():
    spec = {
        "dim": 3,
        "basis": [["[V]"], ["a", "b"], ["c"], ["p"]],
        "products": {
            "a,a": "c",
            "a,b": "c",
            "b,b": 0,
            "a,c": "p",
            "b,c": "p",
        },
        "degree": {"p": 1},
    }
    # (b*b)*a = 0 but b*(b*a) = b*c = p
    with pytest.raises(PresentationError):
        ring_literal(spec)


def test_literal_ring_commutativity_conflict():
    spec = {
        "dim": 2,
        "basis": [["[V]"], ["h"], ["p"]],
        "products": {"h,h": "p"},
        "degree": {"p": 1},
    }
    ring_literal(spec)  # sanity
    spec_conflict = {
        "dim": 2,
        "basis": [["[V]"], ["a", "b"], ["p"]],
        "products": {"a,b": "p", "b,a": "2*p", "a,a": 0, "b,b": 0},
        "degree": {"p": 1},
    }
    with pytest.raises(PresentationError):
        ring_literal(spec_conflict)


def test_literal_ring_chern_must_be_constant():
    spec = {
        "dim": 1,
        "basis": [["[V]"], ["p"]],
        "products": {},
        "degree": {"p": 1},
        "chern": "1 + 2*p",
        "point": "p",
    }
    ring = ring_literal(spec)
    assert ring.require_tangent_chern().degree() == rf(2)


def test_pushforward_validation_failures():
    bl, down, e = ring_blowup_point(P2)
    # forward images must cover every source basis element
    partial = {n: down.forward[n] for n in list(bl.all_names)[:-1]}
    with pytest.raises(PresentationError):
        PushForwardMap(bl, P2, partial, down.pullback)
    # breaking the degree axiom: send the point class to zero
    broken = dict(down.forward)
    broken["h^2"] = P2.zero()
    with pytest.raises(PresentationError):
        PushForwardMap(bl, P2, broken, down.pullback)


def test_pushforward_composition():
    bl1, down1, e1 = ring_blowup_point(P2)
    bl2, down2, e2 = ring_blowup_point(bl1)
    two = down2.then(down1)
    assert two.push(bl2.one()) == P2.one()
    assert two.push(two.pull(P2.basis_class("h"))) == P2.basis_class("h")
    assert two.push(bl2.basis_class("e1")).is_zero()
    with pytest.raises(RingMismatch):
        down1.then(down2)


def test_pushforward_ring_checks():
    _, down, _ = ring_blowup_point(P2)
    with pytest.raises(RingMismatch):
        down.push(P2.basis_class("h"))
    with pytest.raises(RingMismatch):
        down.pull(down.source.basis_class("h"))


def test_proper_transform_conic_through_point():
    bl, down, e = ring_blowup_point(P2)
    conic = P2.basis_class("h").scale(rf(2))
    strict = proper_transform(down, conic, 1)
    assert strict == parse_class("2*h - e1", bl)
    assert (strict * strict).degree() == rf(3)


def test_proper_transform_rejects_bad_input():
    bl, down, e = ring_blowup_point(P2)
    with pytest.raises(UnsupportedCatalog):
        proper_transform(identity_map(P2), P2.basis_class("h"), 1)
    with pytest.raises(RingMismatch):
        proper_transform(down, bl.basis_class("h"), 1)
    with pytest.raises(NotADivisor):
        proper_transform(down, P2.one(), 1)


small_fracs = st.fractions(
    min_value=-4, max_value=4, max_denominator=3
)


def class_on(ring):
    return st.fixed_dictionaries(
        {name: small_fracs for name in ring.all_names}
    ).map(lambda d: ChowClass(ring, {n: rf(c) for n, c in d.items()}))


@settings(max_examples=40, deadline=None)
@given(a=class_on(P2), b=class_on(P2), c=class_on(P2))
def test_ring_axioms_hold_on_random_classes(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@settings(max_examples=40, deadline=None)
@given(a=class_on(P2))
def test_inverse_property(a):
    unit = a + P2.one().scale(rf(1) - a.coefficient("[V]"))
    assert unit * unit.inverse() == P2.one()


@settings(max_examples=25, deadline=None)
@given(a=class_on(P2))
def test_blowdown_projection_formula(a):
    bl, down, e = ring_blowup_point(P2)
    lifted = down.pull(a)
    assert down.push(lifted * (bl.one() + e)) == a * P2.one()
    assert down.push(lifted) == a
