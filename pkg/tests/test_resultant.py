import random

import pytest

from toricgcp import (GF, QQ, MatrixTooLarge, Poly, ce_matrix, det_fraction_free,
                      mixed_volume, toric_resultant)

V23 = ("x", "y", "a1", "a2", "a3", "b1", "b2", "b3", "u0", "u1", "u2")
XY = ("x", "y")
SUP23 = (((0, 1), (1, 0), (1, 1)),) * 2 + (((0, 0), (1, 0), (0, 1)),)


def _generic_23(field=QQ):
    return [Poly.parse(t, V23, field) for t in
            ("a1*y + a2*x + a3*x*y", "b1*y + b2*x + b3*x*y", "u0 + u1*x + u2*y")]


def _bracket_expansion():
    text = ("(a3^2*b2*b1 + b3^2*a2*a1 - b3*a2*a3*b1 - b3*a3*b2*a1)*u0"
            " + (b1^2*a2*a3 - b1*b3*a2*a1 - b2*a1*a3*b1 + b2*b3*a1^2)*u1"
            " + (b1*b3*a2^2 - b2*a2*a3*b1 + b2^2*a3*a1 - b2*b3*a2*a1)*u2")
    return Poly.parse(_expand(text), V23)


def _expand(text):
    # the parser takes sums of monomials; distribute the three brackets by hand
    terms = []
    for block, u in zip(text.split("*u")[:-1], ("u0", "u1", "u2")):
        inner = block[block.index("(") + 1:block.rindex(")")]
        for t in inner.replace(" - ", " + -").split(" + "):
            t = t.strip()
            sign = "-" if t.startswith("-") else "+"
            terms.append(f"{sign} {t.lstrip('-')}*{u}")
    return " ".join(terms).lstrip("+ ")


def test_linear_system_is_a_determinant():
    V = ("x", "y", "a", "b", "c", "d", "e", "f", "g", "h", "k")
    polys = [Poly.parse(t, V) for t in ("a + b*x + c*y", "d + e*x + f*y", "g + h*x + k*y")]
    sup = (((0, 0), (1, 0), (0, 1)),) * 3
    expected = det_fraction_free([[Poly.parse(c, V) for c in row] for row in
                                  (("a", "b", "c"), ("d", "e", "f"), ("g", "h", "k"))], V)
    for method in ("interpolate", "bareiss"):
        rv = toric_resultant(sup, polys, XY, method=method)
        assert rv.poly == expected.normalized()[1].with_vars(rv.poly.vars)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_generic_bilinear_pair_matches_bracket_formula(seed):
    expected = _bracket_expansion().normalized()[1]
    for method in ("interpolate", "bareiss"):
        rv = toric_resultant(SUP23, _generic_23(), XY, seed=seed, method=method)
        assert rv.poly == expected.with_vars(rv.poly.vars)
        assert rv.matrix_size == 7


def test_specialization_vanishes():
    V = ("x", "y", "u0", "u1", "u2")
    polys = [Poly.parse(t, V) for t in ("x + 2*x*y", "x + 3*x*y", "u0 + u1*x + u2*y")]
    assert toric_resultant(SUP23, polys, XY).poly.is_zero()


def test_matrix_structure():
    polys = _generic_23()
    M = ce_matrix(SUP23, polys, XY, seed=0)
    assert M.size == sum(M.content_count(i) for i in range(3))
    assert len(M.nonmixed) < M.size
    # rows for the linear form: one per mixed-cell point at least
    assert M.content_count(2) >= mixed_volume(SUP23[:2])


def test_degree_in_each_coefficient_group():
    rv = toric_resultant(SUP23, _generic_23(), XY)
    groups = (("a1", "a2", "a3"), ("b1", "b2", "b3"), ("u0", "u1", "u2"))
    for i, g in enumerate(groups):
        others = [s for j, s in enumerate(SUP23) if j != i]
        degs = {sum(e[rv.poly.vars.index(v)] for v in g) for e in rv.poly.terms}
        assert degs == {mixed_volume(others)}


def test_planted_common_root_kills_resultant():
    F = GF(101)
    rng = random.Random(3)
    V = ("x", "y")
    sup = (((0, 0), (1, 0), (1, 1)), ((0, 0), (0, 1), (2, 1)), ((0, 0), (1, 0), (0, 1)))
    for _ in range(5):
        root = (rng.randrange(1, 101), rng.randrange(1, 101))
        polys = []
        for s in sup:
            terms = {e: rng.randrange(1, 101) for e in s[1:]}
            value = sum(c * pow(root[0], e[0], 101) * pow(root[1], e[1], 101)
                        for e, c in terms.items())
            terms[s[0]] = -value % 101
            polys.append(Poly(V, terms, F))
        assert toric_resultant(sup, polys, V).poly.is_zero()


def test_seed_independence_and_cap():
    polys = _generic_23()
    a = toric_resultant(SUP23, polys, XY, seed=0).poly
    b = toric_resultant(SUP23, polys, XY, seed=5).poly
    assert a == b
    with pytest.raises(MatrixTooLarge):
        toric_resultant(SUP23, polys, XY, cap=3)


def test_prime_field_resultant_is_reduction_of_rational_one():
    F = GF(101)
    over_q = toric_resultant(SUP23, _generic_23(), XY).poly
    over_p = toric_resultant(SUP23, _generic_23(F), XY).poly
    assert Poly.from_json(over_q.to_json(), F).normalized()[1] == over_p
