import itertools
import random
from fractions import Fraction as Q

import pytest

from toricgcp import (GF, LinearFactor, Poly, SplitError, roots_from_factors, solve, split_linear)

from conftest import A_PRIME, D22, SIMPLEX2, XY, reference_quartic

U2 = ("u0", "u1")
U3 = ("u0", "u1", "u2")
U4 = ("u0", "u1", "u2", "u3")
SIMPLEX3 = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))


def _vectors(split):
    return {f.coeffs: f.multiplicity for f in split.factors}


def test_quartic_splits_into_reference_factors():
    sp = split_linear(reference_quartic())
    assert _vectors(sp) == {
        (1, 1, 1): 1, (1, Q(1, 7), Q(7, 4)): 1, (1, -1, 1): 1, (1, -1, Q(1, 4)): 1}
    assert sp.remainder_degree == 0
    assert sp.reexpand() == reference_quartic()


def test_repeated_factor():
    sp = split_linear(Poly.parse("u0^2 + 2*u0*u1 + u1^2", U2))
    assert _vectors(sp) == {(1, 1): 2}


def _linear_divisors_mod(p, poly):
    F = GF(p)
    found = set()
    for c in itertools.product(range(p), repeat=2):
        if c == (0, 0) or next(x for x in c if x) != 1:
            continue
        L = Poly(U2, {(1, 0): c[0], (0, 1): c[1]}, F)
        try:
            poly.divexact(L)
            found.add(c)
        except Exception:
            pass
    return found


def test_splitting_depends_on_the_field():
    sp = split_linear(Poly.parse("u0^2 + u1^2", U2))
    assert sp.factors == () and sp.remainder == Poly.parse("u0^2 + u1^2", U2)
    g = Poly.parse("u0^2 + u1^2", U2, GF(5))
    sp5 = split_linear(g)
    assert set(_vectors(sp5)) == _linear_divisors_mod(5, g) == {(1, 2), (1, 3)}


def test_split_rejects_bad_input():
    with pytest.raises(SplitError):
        split_linear(Poly(U2, {}))
    with pytest.raises(SplitError):
        split_linear(Poly.parse("u0^2 + u1", U2))


def test_mixed_split_with_remainder():
    f = Poly.parse("u0 - 3*u1", U3) ** 2 * Poly.parse("u0^2 + u1^2 + u2^2", U3) \
        * Poly.parse("2*u1 + u2", U3)
    sp = split_linear(f, seed=4)
    assert _vectors(sp) == {(1, -3, 0): 2, (0, 1, Q(1, 2)): 1}
    assert sp.remainder_degree == 2
    assert sp.reexpand() == f


def test_roots_of_the_worked_example(F22):
    sp = split_linear(reference_quartic())
    roots = roots_from_factors(sp.factors, SIMPLEX2, F22)
    coords = {r.torus_coords for r in roots}
    assert coords == {(1, 1), (Q(1, 7), Q(7, 4)), (-1, 1), (-1, Q(1, 4))}
    assert all(r.status == "torus-root" and r.residuals == (0, 0) for r in roots)
    assert sum(1 for c in coords if c[0] == -1) == 2


def test_twisted_factor_reads_as_projective_point():
    roots = roots_from_factors([LinearFactor((1, -1, 0, 0), 1, U4)], A_PRIME)
    assert roots[0].projective == (1, -1, 0, 0)
    assert roots[0].torus_coords is None


def test_boundary_points():
    f = [LinearFactor((1, 0, 0), 1, U3), LinearFactor((0, 1, 0), 1, U3)]
    origin, infinite = roots_from_factors(f, SIMPLEX2)
    assert origin.status == "boundary" and origin.torus_coords == (0, 0)
    assert infinite.status == "boundary" and infinite.torus_coords is None


def test_solve_worked_example(F22):
    rep = solve(F22, A=SIMPLEX2, D=D22)
    out = rep.to_json()
    assert out["mixed_volume"] == 4 and out["k"] == 1 and out["chow_vanishes"] is True
    assert len(out["factors"]) == 4 and out["remainder_degree"] == 0
    assert sorted(r["torus_coords"] for r in out["roots"]) == sorted(
        [["1", "1"], ["1/7", "7/4"], ["-1", "1"], ["-1", "1/4"]])


def test_solve_bilinear_degeneracy_flags_vanishing_chow_form():
    F = [Poly.parse(t, XY) for t in ("x + 2*x*y", "x + 3*x*y")]
    E = (((0, 1), (1, 0), (1, 1)),) * 2
    rep = solve(F, E=E)
    assert rep.result.k >= 1
    assert all(r.status != "torus-root" for r in rep.roots)


def test_spurious_point_from_the_cubic_example(G3):
    D = (((0, 1, 1), (1, 1, 1)), ((1, 0, 1), (1, 1, 1)), ((1, 1, 0), (1, 1, 1)))
    rep = solve(G3, A=SIMPLEX3, D=D)
    assert rep.result.F_A == Poly.parse("21*u0 - 5*u3", U4)
    (root,) = rep.roots
    assert root.torus_coords == (0, 0, Q(-5, 21)) and root.status == "boundary"


def test_twisted_support_recovers_the_cubic_root(G3):
    rep = solve(G3, A=A_PRIME)
    assert rep.result.k == 0
    assert [r.projective for r in rep.roots] == [(1, -1, 0, 0)]


def _planted_bilinear(rng, p):
    F = GF(p)
    sup = ((0, 0), (1, 0), (0, 1), (1, 1))
    while True:
        pts = [(rng.randrange(1, p), rng.randrange(1, p)) for _ in range(2)]
        if pts[0][0] != pts[1][0] and pts[0][1] != pts[1][1]:
            break
    polys = []
    for _ in range(2):
        a, b = rng.randrange(p), rng.randrange(p)
        # c00 + c10 x + c01 y + c11 xy with (c00, c10) free, solve for (c01, c11)
        rows = [((z[1], z[0] * z[1]), -(a + b * z[0])) for z in pts]
        (m11, m12), r1 = rows[0]
        (m21, m22), r2 = rows[1]
        det = (m11 * m22 - m12 * m21) % p
        inv = pow(det, -1, p)
        c01 = (r1 * m22 - m12 * r2) * inv % p
        c11 = (m11 * r2 - r1 * m21) * inv % p
        polys.append(Poly(XY, dict(zip(sup, (a, b, c01, c11))), F))
    return polys, pts


def test_planted_roots_are_recovered():
    rng = random.Random(2024)
    for _ in range(4):
        F, pts = _planted_bilinear(rng, 101)
        rep = solve(F, A=SIMPLEX2, seed=1)
        got = {r.torus_coords for r in rep.roots if r.status == "torus-root"}
        assert set(pts) <= got
