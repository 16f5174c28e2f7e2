"""Split toric perturbations into linear forms and read roots off them."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .field import QQ, PrimeField
from .fill import irreducible_fill
from .gcp import GcpProblem, GcpResult, gcp
from .poly import NotDivisibleError, Poly
from .resultant import DEFAULT_CAP, DEFAULT_RETRIES
from .univariate import univ_roots

T_VAR = "_line"


class SplitError(RuntimeError):
    pass


@dataclass(frozen=True)
class LinearFactor:
    coeffs: tuple             # one entry per u-variable, first nonzero entry is 1
    multiplicity: int
    vars: tuple

    def as_poly(self, field) -> Poly:
        terms = {}
        for k, c in enumerate(self.coeffs):
            if c:
                e = [0] * len(self.vars)
                e[k] = 1
                terms[tuple(e)] = c
        return Poly(self.vars, terms, field)

    def to_json(self, field) -> dict:
        return {"coeffs": [field.to_str(c) for c in self.coeffs],
                "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class Split:
    factors: tuple
    remainder: Poly           # normalized; constant 1 when F_A splits completely
    scalar: object            # F_A == scalar * prod(L**m) * remainder

    @property
    def remainder_degree(self) -> int:
        return max(self.remainder.total_degree(), 0)

    def reexpand(self) -> Poly:
        field = self.remainder.field
        acc = self.remainder.scale(self.scalar)
        for f in self.factors:
            acc = acc * f.as_poly(field) ** f.multiplicity
        return acc


def _normalize_vector(v, field):
    lead = next(c for c in v if c)
    inv = field.inv(lead)
    if isinstance(field, PrimeField):
        return tuple(c * inv % field.p for c in v)
    return tuple(c * inv for c in v)


def _restrict(f: Poly, p, q) -> Poly:
    """f(p + t q) as a polynomial in the single variable T_VAR."""
    field = f.field
    line = (T_VAR,)
    t = Poly.variable(T_VAR, line, field)
    images = {v: Poly.constant(a, line, field) + t.scale(b) for v, a, b in zip(f.vars, p, q)}
    return f.substitute(images, line)


def _gradient_at(f: Poly, point):
    return [f.derivative(v).evaluate(point) for v in f.vars]


def _directional(f: Poly, q) -> Poly:
    acc = f.zero_like()
    for v, c in zip(f.vars, q):
        if c:
            acc = acc + f.derivative(v).scale(c)
    return acc


def _line(field, rng, m, attempt):
    if attempt == 0 and not isinstance(field, PrimeField):
        p = [Fraction(k + 1) for k in range(m)]
        q = [Fraction((k + 2) * (k + 3) % 11 - 5) for k in range(m)]
        return p, q
    return ([field.random_element(rng, 50) for _ in range(m)],
            [field.random_element(rng, 50) for _ in range(m)])


def split_linear(F_A: Poly, seed: int = 0, max_retries: int = 12) -> Split:
    """Extract every linear factor of a homogeneous polynomial defined over its field.

    Each round restricts the current polynomial to a line, takes a root of
    the restriction, reads the factor off the gradient there (a directional
    derivative first when the root is multiple) and divides it out.
    """
    if F_A.is_zero():
        raise SplitError("cannot split the zero polynomial")
    if not F_A.is_homogeneous():
        raise SplitError("F_A must be homogeneous")
    field = F_A.field
    rng = random.Random(seed)
    m = len(F_A.vars)
    cur = F_A
    found: dict = {}
    attempt = 0
    misses = 0
    while cur.total_degree() > 0:
        if attempt > max_retries * max(1, F_A.total_degree()):
            raise SplitError("no generic line found; retry cap exceeded")
        p, q = _line(field, rng, m, attempt)
        attempt += 1
        r = _restrict(cur, p, q)
        if r.degree(T_VAR) != cur.total_degree():
            continue
        roots, _ = univ_roots(r, seed=attempt)
        if not roots:
            misses += 1
            if misses >= 3:
                break
            continue
        progress = False
        for t0, mult in roots:
            point = [a + t0 * b for a, b in zip(p, q)]
            if isinstance(field, PrimeField):
                point = [x % field.p for x in point]
            g = cur
            for _ in range(mult - 1):
                g = _directional(g, q)
            grad = _gradient_at(g, point)
            if not any(grad):
                continue
            vec = _normalize_vector(grad, field)
            L = LinearFactor(vec, 1, cur.vars).as_poly(field)
            try:
                cur = cur.divexact(L)
            except NotDivisibleError:
                continue
            found[vec] = found.get(vec, 0) + 1
            progress = True
            misses = 0
            break
        if not progress:
            misses += 1
            if misses >= 3:
                break
    scalar, rem = cur.normalized()
    if cur.is_constant():
        scalar, rem = cur.constant_value(), Poly.constant(1, cur.vars, field)
    factors = tuple(LinearFactor(v, k, F_A.vars) for v, k in sorted(found.items()))
    out = Split(factors, rem, scalar)
    if out.reexpand() != F_A:
        raise SplitError("re-expansion check failed")
    return out


@dataclass(frozen=True)
class RecoveredRoot:
    projective: tuple         # [c_e | e in A]
    torus_coords: tuple | None
    multiplicity: int
    status: str               # "torus-root", "not-a-root", "boundary" or "projective-only"
    residuals: tuple | None = None
    classification: str = "unclassified"

    def to_json(self, field) -> dict:
        def strs(v):
            return None if v is None else [field.to_str(c) for c in v]
        return {
            "projective": strs(self.projective),
            "torus_coords": strs(self.torus_coords),
            "multiplicity": self.multiplicity,
            "status": self.status,
            "residuals": strs(self.residuals),
            "classification": self.classification,
        }


def _reduce(x, field):
    return x % field.p if isinstance(field, PrimeField) else x


def _mono(z, e, field):
    v = field.one
    for zi, k in zip(z, e):
        v = _reduce(v * zi ** k, field)
    return v


def _ratio_point(coeffs, A, field):
    """(c_{a+e_i} / c_a)_i for the first base point a in A with c_a != 0."""
    n = len(A[0])
    lookup = dict(zip(A, coeffs))
    bases = sorted((a for a in A if lookup[a]), key=lambda a: (sum(a), a))
    for a in bases:
        shifted = [tuple(a[k] + (k == i) for k in range(n)) for i in range(n)]
        if all(b in lookup for b in shifted):
            inv = field.inv(lookup[a])
            return tuple(_reduce(lookup[b] * inv, field) for b in shifted)
    return None


def _has_unit_steps(A) -> bool:
    n = len(A[0])
    pts = set(A)
    return any(all(tuple(a[k] + (k == i) for k in range(n)) in pts for i in range(n))
               for a in A)


def roots_from_factors(factors: Sequence[LinearFactor], A: Sequence, F: Sequence[Poly] | None = None,
                       field=None) -> list:
    """One recovered point per factor.

    When A contains some a together with every a + e_i, torus coordinates are
    read off as coefficient ratios. A point is labeled "torus-root" only if
    its coordinates are nonzero, reproduce the whole vector [z^e] up to scale
    and (when F is supplied) make every f_i vanish exactly.
    """
    A = [tuple(a) for a in A]
    if field is None:
        field = F[0].field if F else QQ
    chartable = _has_unit_steps(A)
    out = []
    for fac in factors:
        z = _ratio_point(fac.coeffs, A, field) if chartable else None
        if not chartable:
            out.append(RecoveredRoot(fac.coeffs, None, fac.multiplicity, "projective-only"))
            continue
        if z is None or not all(z):
            out.append(RecoveredRoot(fac.coeffs, z, fac.multiplicity, "boundary"))
            continue
        base = next(k for k, c in enumerate(fac.coeffs) if c)
        scale = _reduce(fac.coeffs[base] * field.inv(_mono(z, A[base], field)), field)
        on_chart = all(_reduce(c - scale * _mono(z, e, field), field) == 0
                       for c, e in zip(fac.coeffs, A))
        res = None
        if F is not None:
            res = tuple(f.evaluate(list(z)) for f in F)
        if not on_chart:
            status = "boundary"
        elif res is not None and any(res):
            status = "not-a-root"
        else:
            status = "torus-root"
        out.append(RecoveredRoot(fac.coeffs, z, fac.multiplicity, status, res))
    return out


@dataclass(frozen=True)
class SolveReport:
    result: GcpResult
    split: Split
    roots: tuple
    field: object

    def to_json(self, emit_H: bool = False) -> dict:
        r, f = self.result, self.field
        out = {
            "mixed_volume": r.mixed_volume,
            "k": r.k,
            "chow_vanishes": r.k > 0,
            "A": [list(a) for a in r.A],
            "D": [[list(e) for e in d] for d in r.D],
            "F_A": r.F_A.to_json(),
            "factors": [fac.to_json(f) for fac in self.split.factors],
            "roots": [root.to_json(f) for root in self.roots],
            "remainder": self.split.remainder.to_json(),
            "remainder_degree": self.split.remainder_degree,
            "scalar": f.to_str(_reduce(r.F_A_scalar * self.split.scalar, f)),
            "seed": r.seed,
            "attempt": r.attempt,
            "matrix_size": r.matrix_size,
            "field": f.to_json(),
        }
        if emit_H:
            out["H"] = r.H.to_json()
        return out


class StageError(RuntimeError):
    def __init__(self, stage: str, err: Exception):
        super().__init__(f"{stage}: {err}")
        self.stage = stage
        self.cause = err


def solve(F: Sequence[Poly], E=None, A=None, D=None, seed: int = 0,
          max_retries: int = DEFAULT_RETRIES, cap: int = DEFAULT_CAP) -> SolveReport:
    """fill, toric GCP, linear splitting and root reading in one pass."""
    try:
        prob = GcpProblem.build(F, E, A, D)
    except Exception as err:
        raise StageError("setup", err) from err
    if prob.D is None:
        try:
            prob = GcpProblem(prob.F, prob.xvars, prob.E, prob.A, irreducible_fill(prob.E), prob.field)
        except Exception as err:
            raise StageError("fill", err) from err
    try:
        res = gcp(prob, seed=seed, max_retries=max_retries, cap=cap)
    except Exception as err:
        raise StageError("gcp", err) from err
    try:
        sp = split_linear(res.F_A, seed=seed)
    except Exception as err:
        raise StageError("split", err) from err
    total = sum(f.multiplicity for f in sp.factors) + sp.remainder_degree
    if total != res.mixed_volume:
        raise StageError("split", SplitError(f"degree count {total} != M(E)={res.mixed_volume}"))
    roots = roots_from_factors(sp.factors, prob.A, prob.F, prob.field)
    return SolveReport(res, sp, tuple(roots), prob.field)
