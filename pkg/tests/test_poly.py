
import pytest
from hypothesis import given, settings, strategies as st

from toricgcp import GF, NotDivisibleError, Poly, PolyError

V = ("x", "y", "z")

coeff = st.integers(-5, 5)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2))
polys = st.dictionaries(exps, coeff, max_size=5).map(lambda d: Poly(V, d))
nonzero = polys.filter(lambda p: not p.is_zero())


def test_parse_and_print_roundtrip():
    p = Poly.parse("3*x^2*y - 1/2*z + 7", V)
    assert Poly.parse(str(p), V) == p
    assert p.evaluate([1, 2, 4]) == 3 * 2 - 2 + 7


def test_json_roundtrip():
    p = Poly.parse("x*y^2 - 5/3", V)
    assert Poly.from_json(p.to_json()) == p
    q = Poly.parse("x - 1", V, GF(7))
    assert Poly.from_json(q.to_json(), GF(7)) == q


@settings(max_examples=60, deadline=None)
@given(nonzero, nonzero)
def test_divexact_recovers_factor(a, b):
    assert (a * b).divexact(b) == a


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a


def test_divexact_failure():
    x = Poly.variable("x", V)
    y = Poly.variable("y", V)
    with pytest.raises(NotDivisibleError):
        (x * x + y).divexact(x)


def test_incompatible_rings_rejected():
    with pytest.raises(PolyError, match="incompatible rings"):
        Poly.variable("x", ("x",)) + Poly.variable("x", ("x", "y"))


def test_normalization_conventions():
    s, p = Poly.parse("-4*x + 6*y", V).normalized()
    assert p == Poly.parse("2*x - 3*y", V) and s == -2
    s, p = Poly.parse("3*x + y", V, GF(7)).normalized()
    assert p.leading_term()[1] == 1
    assert p.scale(s) == Poly.parse("3*x + y", V, GF(7))


def test_substitution_and_derivative():
    p = Poly.parse("x^2*y + z", V)
    assert p.subs({"x": 2}) == Poly.parse("4*y + z", V)
    assert p.derivative("x") == Poly.parse("2*x*y", V)
    assert p.coefficients_in("z") == {0: Poly.parse("x^2*y", V), 1: Poly.constant(1, V)}
    assert p.is_homogeneous() is False
    assert Poly.parse("x*y + z^2", V).is_homogeneous()


def test_field_reduction():
    p = Poly.parse("7*x + 8", ("x",), GF(7))
    assert p == Poly.constant(1, ("x",), GF(7))
    assert Poly.parse("1/2*x", ("x",), GF(7)).terms == {(1,): 4}
