"""Toric generalized characteristic polynomials, Chow forms and choices of A."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .field import QQ
from .fill import FillError, fills, irreducible_fill
from .geometry import (GeometryError, as_support, as_tuple, convex_hull, face,
                       mixed_volume, MAX_DIM)
from .poly import Poly, PolyError, support_of
from .resultant import DEFAULT_CAP, DEFAULT_RETRIES, toric_resultant

S_VAR = "s"


class GcpError(ValueError):
    pass


def simplex_vertices(n: int) -> tuple:
    """0, e_1, ..., e_n in that order."""
    pts = [(0,) * n]
    for i in range(n):
        pts.append(tuple(1 if j == i else 0 for j in range(n)))
    return tuple(pts)


def ordered_support(points) -> tuple:
    """Deduplicate while keeping the caller's order (A indexes the u variables)."""
    seen = []
    for p in points:
        p = tuple(int(c) for c in p)
        if p not in seen:
            seen.append(p)
    return tuple(seen)


def u_names(A: Sequence) -> tuple:
    return tuple(f"u{k}" for k in range(len(A)))


def linear_form(A: Sequence, xvars: Sequence[str], uvars: Sequence[str], vars, field) -> Poly:
    """g(x) = sum_e u_e x^e over ``vars``."""
    terms = {}
    xi = [vars.index(v) for v in xvars]
    for e, u in zip(A, uvars):
        ex = [0] * len(vars)
        for k, c in zip(xi, e):
            ex[k] = c
        ex[vars.index(u)] = 1
        terms[tuple(ex)] = field.one
    return Poly(vars, terms, field)


@dataclass(frozen=True)
class GcpProblem:
    F: tuple                  # Polys over xvars
    xvars: tuple
    E: tuple
    A: tuple
    D: tuple | None = None
    field: object = QQ

    @classmethod
    def build(cls, F: Sequence[Poly], E=None, A=None, D=None) -> "GcpProblem":
        F = tuple(F)
        if not F:
            raise GcpError("empty system")
        xvars = F[0].vars
        n = len(xvars)
        if len(F) != n:
            raise GcpError(f"need a square system: {len(F)} equations in {n} variables")
        if any(f.vars != xvars for f in F):
            raise PolyError("incompatible rings")
        if E is None:
            E = tuple(as_support(support_of(f)) for f in F)
        else:
            E = as_tuple(E)
            for i, (f, e) in enumerate(zip(F, E)):
                if not set(support_of(f)) <= set(e):
                    raise GcpError(f"support of f_{i + 1} is not contained in E_{i + 1}")
        A = simplex_vertices(n) if A is None else ordered_support(A)
        if len(A) < 2:
            raise GcpError("A must have at least two elements")
        if D is not None:
            D = as_tuple(D)
        return cls(F, xvars, E, A, D, F[0].field)


@dataclass(frozen=True)
class GcpResult:
    H: Poly                   # normalized H over u-variables and s
    k: int
    F_A: Poly                 # normalized trailing coefficient
    F_A_scalar: object        # trailing coefficient of H == F_A_scalar * F_A
    Ch_A: Poly                # s^0 coefficient of H (zero when k > 0)
    mixed_volume: int
    s_degree: int
    expected_s_degree: int
    uvars: tuple
    A: tuple
    D: tuple
    E: tuple
    seed: int
    attempt: int
    matrix_size: int


def perturb_system(F: Sequence[Poly], D: Sequence, E: Sequence | None = None,
                   s: str = S_VAR) -> tuple:
    """``f_i - s * sum_{e in D_i} x^e`` over the variables of F plus ``s``."""
    xvars = F[0].vars
    D = as_tuple(D)
    if E is not None:
        for i, (d, e) in enumerate(zip(D, as_tuple(E))):
            if not set(d) <= set(e):
                raise GcpError(f"D_{i + 1} is not contained in E_{i + 1}")
    vars = xvars + (s,)
    out = []
    for f, d in zip(F, D):
        terms = {tuple(e) + (1,): -f.field.one for e in d}
        out.append(f.with_vars(vars) + Poly(vars, terms, f.field))
    return tuple(out)


def gcp(problem: GcpProblem, seed: int = 0, max_retries: int = DEFAULT_RETRIES,
        cap: int = DEFAULT_CAP) -> GcpResult:
    """Compute H(u;s), its trailing power k and coefficient F_A, and Ch_A."""
    E, A, xvars, fld = problem.E, problem.A, problem.xvars, problem.field
    mv = mixed_volume(E)
    if mv <= 0:
        raise GcpError("M(E)=0: the fill hypothesis M(E)>0 is violated")
    D = problem.D if problem.D is not None else irreducible_fill(E)
    if not fills(D, E, mv=mv):
        raise FillError("supplied D does not fill E")
    uvars = u_names(A)
    vars = xvars + uvars + (S_VAR,)
    pert = perturb_system(problem.F, D, E)
    polys = [p.with_vars(vars) for p in pert]
    polys.append(linear_form(A, xvars, uvars, vars, fld))
    supports = tuple(E) + (as_support(A),)
    rv = toric_resultant(supports, polys, xvars, seed=seed, max_retries=max_retries, cap=cap)
    H = rv.poly.with_vars(uvars + (S_VAR,))
    if H.is_zero():
        raise GcpError("H vanished identically")
    by_s = H.coefficients_in(S_VAR)
    k = min(by_s)
    trailing = by_s[k].with_vars(uvars)
    scalar, F_A = trailing.normalized()
    if not F_A.is_homogeneous() or F_A.total_degree() != mv:
        raise GcpError(f"F_A is not homogeneous of degree M(E)={mv}")
    Ch = by_s[0].with_vars(uvars) if k == 0 else Poly(uvars, {}, fld)
    expected = sum(mixed_volume([e for j, e in enumerate(E) if j != i] + [as_support(A)])
                   for i in range(len(E)))
    return GcpResult(H, k, F_A, scalar, Ch, mv, H.degree(S_VAR), expected, uvars, A,
                     tuple(D), tuple(E), seed, rv.attempt, rv.matrix_size)


def chow_form(F: Sequence[Poly], E=None, A=None, seed: int = 0,
              max_retries: int = DEFAULT_RETRIES, cap: int = DEFAULT_CAP) -> Poly:
    """Res_{(E,A)}(F, g) in the u-variables, normalized; possibly zero."""
    prob = GcpProblem.build(F, E, A)
    uvars = u_names(prob.A)
    vars = prob.xvars + uvars
    polys = [f.with_vars(vars) for f in prob.F]
    polys.append(linear_form(prob.A, prob.xvars, uvars, vars, prob.field))
    supports = tuple(prob.E) + (as_support(prob.A),)
    rv = toric_resultant(supports, polys, prob.xvars, seed=seed, max_retries=max_retries,
                         cap=cap)
    return rv.poly.with_vars(uvars)


def leading_coefficient_check(problem: GcpProblem, result: GcpResult, seed: int = 0) -> bool:
    """Top s-coefficient of H agrees with Res_{(E,A)}(F*, g) up to a constant."""
    D = result.D
    fld = problem.field
    fstar = []
    for d in D:
        fstar.append(Poly(problem.xvars, {tuple(e): fld.one for e in d}, fld))
    top = result.H.coefficients_in(S_VAR)[result.s_degree].with_vars(result.uvars)
    other = chow_form(fstar, problem.E, problem.A, seed=seed)
    return top.normalized()[1] == other.normalized()[1]


# ---------------------------------------------------------------------------
# compatibility and twisted Chow supports

def is_compatible(P_vertices, Q_vertices) -> bool:
    """Whether the normal fan of Conv(P) refines that of Conv(Q)."""
    hp = convex_hull(P_vertices)
    hq = convex_hull(Q_vertices)
    if hp.dim != hq.dim:
        raise GeometryError("polytopes live in different dimensions")
    for v in hp.vertices:
        rays = [f.normal for f in hp.facets if v in f.vertices]
        inner = [sum(r[k] for r in rays) for k in range(hp.dim)]
        best = face(hq.vertices, inner)
        if len(best) != 1:
            return False
        q = best[0]
        for r in rays:
            if q not in face(hq.vertices, r):
                return False
    return True


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def simplex_product_catalog(n: int) -> list:
    """Vertex sets of products of unit simplices (either orientation) over
    coordinate partitions, fewest blocks first."""
    parts = sorted((sorted(map(sorted, p)) for p in _set_partitions(list(range(n)))),
                   key=lambda p: (len(p), p))
    out = []
    for part in parts:
        for signs in itertools.product((1, -1), repeat=len(part)):
            factors = []
            for block, sign in zip(part, signs):
                base = [0] * n if sign > 0 else [1 if j in block else 0 for j in range(n)]
                verts = []
                for j in block:
                    v = list(base)
                    v[j] += sign
                    verts.append(tuple(v))
                # the apex goes first for 0,e_1,...; last for its reflection
                verts = [tuple(base)] + verts if sign > 0 else verts + [tuple(base)]
                factors.append(verts)
            pts = []
            for combo in itertools.product(*factors):
                pts.append(tuple(sum(c[k] for c in combo) for k in range(n)))
            entry = tuple(dict.fromkeys(pts))
            if set(entry) not in [set(x) for x in out]:
                out.append(entry)
    return out


def twisted_chow_support(P_vertices):
    """First simplex-product vertex set in the catalog compatible with P, or None."""
    pts = as_support(P_vertices)
    n = len(pts[0])
    if n > MAX_DIM:
        raise GeometryError("unsupported dimension")
    for A in simplex_product_catalog(n):
        if is_compatible(pts, A):
            return A
    return None
