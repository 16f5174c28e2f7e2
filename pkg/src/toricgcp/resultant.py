"""Toric resultants through Canny-Emiris matrices.

``det(M)`` is a multiple of the resultant; the extraneous factor is the
principal minor on the lattice points lying in non-mixed cells. The quotient
is obtained either by symbolic Bareiss elimination followed by exact
division, or by evaluating both determinants at the nodes of a grid sized by
the known degree bounds and interpolating, then re-checking the identity
``Res * det(M') == det(M)`` at fresh random points.
"""
from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .field import PrimeField
from .geometry import (DegenerateLiftingError, GeometryError, MixedCell, as_support,
                       dim_of, minkowski_sum, mixed_subdivision, mixed_volume, _solve)
from .linalg import det_fraction_free, det_numeric
from .poly import NotDivisibleError, Poly, PolyError, split_by_monomial

log = logging.getLogger(__name__)

DEFAULT_CAP = 2000
DEFAULT_RETRIES = 8
GRID_BUDGET = 20000
PERTURB_VAR = "_t"


class ResultantError(RuntimeError):
    pass


class UnluckySpecialization(ResultantError):
    def __init__(self, detail=""):
        msg = "unlucky specialization: supply symbolic tags"
        super().__init__(msg + (f" ({detail})" if detail else ""))


class MatrixTooLarge(ResultantError):
    pass


@dataclass(frozen=True)
class CEMatrix:
    points: tuple             # lattice points indexing rows and columns
    row_content: tuple        # (i, a): row p holds x^(p - a) * f_i (i is 0-based)
    cells: tuple              # cell of the subdivision containing p - delta
    entries: tuple            # per row: tuple of (column, coefficient Poly)
    delta: tuple
    lifting_seed: int
    attempt: int
    coeff_vars: tuple
    field: object

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def nonmixed(self) -> tuple:
        return tuple(k for k, c in enumerate(self.cells) if not c.is_mixed)

    def content_count(self, i: int) -> int:
        return sum(1 for j, _ in self.row_content if j == i)

    def dense(self, rows=None) -> list:
        """Dense matrix of Polys over ``coeff_vars`` (optionally a principal submatrix)."""
        idx = list(range(self.size)) if rows is None else list(rows)
        pos = {k: j for j, k in enumerate(idx)}
        zero = Poly(self.coeff_vars, {}, self.field)
        out = []
        for k in idx:
            row = [zero] * len(idx)
            for col, c in self.entries[k]:
                if col in pos:
                    row[pos[col]] = c
            out.append(row)
        return out


@dataclass(frozen=True)
class ResultantValue:
    poly: Poly                # normalized resultant over the coefficient variables
    scalar: object            # det(M)/det(M') == scalar * poly
    supports_used: tuple
    matrix_size: int
    method: str
    seed: int
    attempt: int
    perturbed: bool = False

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero()


# ---------------------------------------------------------------------------
# matrix construction

def _coefficient_maps(polys, xvars, supports):
    cvars = tuple(v for v in polys[0].vars if v not in xvars)
    maps = []
    for i, (f, A) in enumerate(zip(polys, supports)):
        if f.vars != polys[0].vars:
            raise PolyError("incompatible rings")
        cm = split_by_monomial(f, xvars, cvars)
        extra = set(cm) - set(A)
        if extra:
            raise ResultantError(f"polynomial {i + 1} has monomials {sorted(extra)} "
                                 f"outside its declared support")
        maps.append(cm)
    return cvars, maps


def _cell_geometry(cell: MixedCell, n: int):
    base = [sum(s[0][k] for s in cell.summands) for k in range(n)]
    dirs = []
    owners = []
    for i, s in enumerate(cell.summands):
        for b in s[1:]:
            dirs.append([x - y for x, y in zip(b, s[0])])
            owners.append(i)
    lo = [sum(min(p[k] for p in s) for s in cell.summands) for k in range(n)]
    hi = [sum(max(p[k] for p in s) for s in cell.summands) for k in range(n)]
    return base, dirs, owners, lo, hi


def _locate(cell_geo, y, nsummands):
    """Barycentric test of ``y`` in a fine cell: 1 inside, 0 outside, -1 on boundary."""
    base, dirs, owners, _, _ = cell_geo
    n = len(base)
    rhs = [y[k] - base[k] for k in range(n)]
    cols = [[dirs[j][k] for j in range(n)] for k in range(n)]
    mu = _solve(cols, rhs)
    sums = [Fraction(0)] * nsummands
    boundary = False
    for m, i in zip(mu, owners):
        if m < 0:
            return 0
        if m == 0:
            boundary = True
        sums[i] += m
    for s in sums:
        if s > 1:
            return 0
        if s == 1:
            boundary = True
    return -1 if boundary else 1


def _choose_delta(supports, attempt, rng):
    n = len(supports[0][0])
    span = max(max(p[k] for s in supports for p in s) - min(p[k] for s in supports for p in s)
               for k in range(n)) + 2
    q = span * (n + 1) + 1
    while any(q % d == 0 for d in range(2, int(q ** 0.5) + 1)):
        q += 1
    if attempt == 0:
        return tuple(Fraction(j, q * q) for j in range(1, n + 1))
    return tuple(Fraction(rng.randrange(1, q * q), q ** 4) for _ in range(n))


def ce_matrix(supports: Sequence, polys: Sequence[Poly], xvars: Sequence[str],
              seed: int = 0, max_retries: int = DEFAULT_RETRIES,
              cap: int = DEFAULT_CAP, field=None) -> CEMatrix:
    """Canny-Emiris matrix for n+1 polynomials with the given supports."""
    supports = tuple(as_support(s) for s in supports)
    xvars = tuple(xvars)
    n = len(xvars)
    if len(supports) != n + 1 or len(polys) != n + 1:
        raise ResultantError(f"need {n + 1} supports and polynomials for {n} variables")
    if any(len(s[0]) != n for s in supports):
        raise ResultantError("support dimension does not match the variables")
    if dim_of(minkowski_sum(supports)) < n:
        raise GeometryError("Minkowski sum is not full-dimensional")
    field = field or polys[0].field
    cvars, cmaps = _coefficient_maps(polys, xvars, supports)
    rng = random.Random(seed * 7919 + 17)
    last = None
    for attempt in range(max_retries):
        try:
            sub = mixed_subdivision(supports, seed=seed * 101 + attempt, check=False)
        except DegenerateLiftingError as exc:
            last = exc
            continue
        delta = _choose_delta(supports, attempt, rng)
        located = {}
        ok = True
        for cell in sub.cells:
            geo = _cell_geometry(cell, n)
            lo = [math.ceil(geo[3][k] + delta[k]) for k in range(n)]
            hi = [math.floor(geo[4][k] + delta[k]) for k in range(n)]
            for p in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
                y = [p[k] - delta[k] for k in range(n)]
                where = _locate(geo, y, n + 1)
                if where == -1:
                    ok = False
                    break
                if where == 1:
                    if p in located:
                        ok = False
                        break
                    located[p] = cell
            if not ok:
                break
            if len(located) > cap:
                raise MatrixTooLarge(f"resultant matrix exceeds the cap of {cap} rows")
        if not ok:
            last = ResultantError("lattice point on a cell boundary")
            continue
        points = tuple(sorted(located))
        col = {p: k for k, p in enumerate(points)}
        contents, cells, entries = [], [], []
        for p in points:
            cell = located[p]
            i = max(j for j, s in enumerate(cell.summands) if len(s) == 1)
            a = cell.summands[i][0]
            shift = tuple(x - y for x, y in zip(p, a))
            row = []
            for b, c in cmaps[i].items():
                q = tuple(x + y for x, y in zip(shift, b))
                if q not in col:
                    raise ResultantError("row monomial outside the point set")
                row.append((col[q], c))
            row.sort()
            contents.append((i, a))
            cells.append(cell)
            entries.append(tuple(row))
        return CEMatrix(points, tuple(contents), tuple(cells), tuple(entries), delta,
                        seed, attempt, cvars, field)
    raise ResultantError(f"could not build a resultant matrix: {last}")


# ---------------------------------------------------------------------------
# evaluation / interpolation

class _NumericMatrix:
    """Evaluates a CEMatrix (and its extraneous minor) at points."""

    def __init__(self, M: CEMatrix, sub_rows: tuple):
        self.M = M
        self.sub = sub_rows
        self.coeffs = []
        index = {}
        self.cells = []
        for row in M.entries:
            r = []
            for col, c in row:
                key = (c.vars, tuple(sorted(c.terms.items())))
                if key not in index:
                    index[key] = len(self.coeffs)
                    self.coeffs.append(c)
                r.append((col, index[key]))
            self.cells.append(r)
        pos = {k: j for j, k in enumerate(sub_rows)}
        self.sub_cells = [[(pos[col], ci) for col, ci in self.cells[k] if col in pos]
                          for k in sub_rows]
        sub_vars = set()
        for row in self.sub_cells:
            for _, ci in row:
                sub_vars |= set(self.coeffs[ci].used_vars())
        self.sub_var_idx = [i for i, v in enumerate(M.coeff_vars) if v in sub_vars]
        self._sub_cache = {}

    def _values(self, point):
        return [c.evaluate(point) for c in self.coeffs]

    def det_full(self, point, vals=None):
        vals = vals if vals is not None else self._values(point)
        n = self.M.size
        zero = self.M.field.zero
        rows = []
        for r in self.cells:
            row = [zero] * n
            for col, ci in r:
                row[col] = vals[ci]
            rows.append(row)
        return det_numeric(rows, self.M.field)

    def det_sub(self, point, vals=None):
        key = tuple(point[i] for i in self.sub_var_idx)
        if key in self._sub_cache:
            return self._sub_cache[key]
        vals = vals if vals is not None else self._values(point)
        n = len(self.sub)
        zero = self.M.field.zero
        rows = []
        for r in self.sub_cells:
            row = [zero] * n
            for col, ci in r:
                row[col] = vals[ci]
            rows.append(row)
        d = det_numeric(rows, self.M.field)
        self._sub_cache[key] = d
        return d


def _interp_1d(nodes, values, field):
    """Monomial coefficients of the interpolating polynomial (low degree first)."""
    mod = field.p if isinstance(field, PrimeField) else None
    inv = field.inv
    m = len(nodes)
    coef = list(values)
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            v = (coef[i] - coef[i - 1]) * inv(nodes[i] - nodes[i - j])
            coef[i] = v % mod if mod is not None else v
    out = [field.zero] * m
    for i in range(m - 1, -1, -1):
        # out = out * (x - nodes[i]) + coef[i]
        new = [field.zero] * m
        for k in range(m - 1):
            new[k + 1] += out[k]
        for k in range(m):
            new[k] -= out[k] * nodes[i]
        new[0] += coef[i]
        out = [x % mod for x in new] if mod is not None else new
    return out


def interpolate_grid(func, nvars: int, bounds: Sequence[int], nodes: Sequence[Sequence],
                     field) -> dict:
    """Exponent -> coefficient map of the polynomial with per-variable degree
    at most ``bounds`` that agrees with ``func`` on the tensor grid."""
    table = {}
    for idx in itertools.product(*[range(b + 1) for b in bounds]):
        table[idx] = func(tuple(nodes[k][idx[k]] for k in range(nvars)))
    for axis in range(nvars):
        new = {}
        others = [range(b + 1) for k, b in enumerate(bounds) if k != axis]
        for rest in itertools.product(*others):
            def key(j):
                r = list(rest)
                r.insert(axis, j)
                return tuple(r)
            vals = [table[key(j)] for j in range(bounds[axis] + 1)]
            co = _interp_1d(nodes[axis], vals, field)
            for j, c in enumerate(co):
                new[key(j)] = c
        table = new
    return {e: c for e, c in table.items() if c}


def degree_bounds(supports, cmaps, cvars, n):
    """Per-variable degree bounds and homogeneity groups for the resultant."""
    mvs = []
    for i in range(n + 1):
        others = [s for j, s in enumerate(supports) if j != i]
        mvs.append(mixed_volume(others))
    bounds = []
    for v in cvars:
        b = 0
        for i, cm in enumerate(cmaps):
            dv = max((c.degree(v) for c in cm.values()), default=0)
            b += mvs[i] * max(dv, 0)
        bounds.append(b)
    groups = []
    used = [set() for _ in cmaps]
    for i, cm in enumerate(cmaps):
        for c in cm.values():
            used[i] |= set(c.used_vars())
    for i, cm in enumerate(cmaps):
        vs = used[i]
        if not vs or any(vs & used[j] for j in range(len(cmaps)) if j != i):
            continue
        if all(c.total_degree() == 1 and c.is_homogeneous() for c in cm.values()):
            groups.append((sorted(cvars.index(v) for v in vs), mvs[i]))
    return mvs, bounds, groups


def _res_by_interpolation(M: CEMatrix, cmaps, supports, n, rng, checks=3):
    field = M.field
    cvars = M.coeff_vars
    num = _NumericMatrix(M, M.nonmixed)
    mvs, bounds, groups = degree_bounds(supports, cmaps, cvars, n)
    fixed = {}
    homog = []
    for idxs, deg in groups:
        fixed[idxs[0]] = field.one
        homog.append((idxs[0], idxs[1:], deg))
    grid_vars = [k for k in range(len(cvars)) if k not in fixed]
    gb = [bounds[k] for k in grid_vars]
    size = 1
    for b in gb:
        size *= b + 1
    if size > GRID_BUDGET:
        return None
    bound = 10 ** 6
    for attempt in range(6):
        nodes = []
        for b in gb:
            if isinstance(field, PrimeField):
                if b + 1 > field.p - 1:
                    raise ResultantError("field too small for interpolation")
                nodes.append(field.sample_points(rng, b + 1))
            else:
                nodes.append(field.sample_points(rng, b + 1, max(bound, 4 * (b + 1))) if attempt
                             else [Fraction(j) for j in range(1, b + 2)])
        zero_den = []

        def value(pt):
            full = [None] * len(cvars)
            for k, v in fixed.items():
                full[k] = v
            for k, v in zip(grid_vars, pt):
                full[k] = v
            vals = num._values(full)
            d2 = num.det_sub(full, vals)
            if not d2:
                zero_den.append(pt)
                return field.zero
            d1 = num.det_full(full, vals)
            return d1 * field.inv(d2) if not isinstance(field, PrimeField) else d1 * field.inv(d2) % field.p

        table = interpolate_grid(value, len(grid_vars), gb, nodes, field)
        if zero_den:
            log.debug("extraneous minor vanished on the grid; resampling nodes")
            if all(num.det_sub(_rand_point(field, rng, len(cvars))) == 0 for _ in range(3)):
                raise UnluckySpecialization("extraneous minor vanishes identically")
            continue
        terms = {}
        for e, c in table.items():
            full = [0] * len(cvars)
            for k, x in zip(grid_vars, e):
                full[k] = x
            for dropped, rest, deg in homog:
                s = sum(full[k] for k in rest)
                if s > deg:
                    raise NotDivisibleError("det(M)/det(M') is not a homogeneous polynomial for this matrix")
                full[dropped] = deg - s
            terms[tuple(full)] = c
        res = Poly(cvars, terms, field)
        if not _verify(res, num, field, rng, checks):
            raise NotDivisibleError("det(M)/det(M') is not a polynomial for this matrix")
        return res
    raise UnluckySpecialization("extraneous minor vanished on every sampled grid")


def _rand_point(field, rng, k):
    if isinstance(field, PrimeField):
        return [rng.randrange(1, field.p) for _ in range(k)]
    return [Fraction(rng.randint(-10 ** 6, 10 ** 6)) for _ in range(k)]


def _verify(res: Poly, num: _NumericMatrix, field, rng, checks) -> bool:
    done = 0
    tries = 0
    while done < checks and tries < 10 * checks:
        tries += 1
        pt = _rand_point(field, rng, len(res.vars))
        vals = num._values(pt)
        d2 = num.det_sub(pt, vals)
        if not d2:
            continue
        d1 = num.det_full(pt, vals)
        lhs = res.evaluate(pt) * d2
        if isinstance(field, PrimeField):
            lhs %= field.p
        if lhs != d1:
            return False
        done += 1
    return done == checks


def _res_by_bareiss(M: CEMatrix):
    dm = det_fraction_free(M.dense(), M.coeff_vars, M.field)
    sub = M.nonmixed
    dsub = det_fraction_free(M.dense(sub), M.coeff_vars, M.field)
    if dsub.is_zero():
        raise UnluckySpecialization("extraneous minor vanishes identically")
    return dm.divexact(dsub)


def toric_resultant(supports: Sequence, polys: Sequence[Poly], xvars: Sequence[str],
                    seed: int = 0, max_retries: int = DEFAULT_RETRIES,
                    cap: int = DEFAULT_CAP, method: str = "auto",
                    perturb: bool = True) -> ResultantValue:
    """Toric resultant of ``polys`` (n+1 polynomials over ``xvars`` plus
    coefficient variables) with respect to ``supports``.

    ``method`` is ``"interpolate"``, ``"bareiss"`` or ``"auto"``. When the
    extraneous minor vanishes identically for every lifting tried and
    ``perturb`` is set, the system is deformed by ``t * h`` with random
    full-support ``h`` and the result is taken at ``t = 0``.
    """
    supports = tuple(as_support(s) for s in supports)
    xvars = tuple(xvars)
    n = len(xvars)
    field = polys[0].field
    last = None
    for attempt in range(max_retries):
        s = seed + attempt
        try:
            M = ce_matrix(supports, polys, xvars, seed=s, max_retries=max_retries,
                          cap=cap, field=field)
            cvars, cmaps = _coefficient_maps(polys, xvars, supports)
            rng = random.Random(s * 31 + 7)
            res = None
            used = method
            if method in ("auto", "interpolate"):
                res = _res_by_interpolation(M, cmaps, supports, n, rng)
                used = "interpolate"
                if res is None and method == "interpolate":
                    raise ResultantError("interpolation grid exceeds the budget")
            if res is None:
                res = _res_by_bareiss(M)
                used = "bareiss"
            scalar, norm = res.normalized()
            return ResultantValue(norm, scalar, supports, M.size, used, seed, attempt)
        except (UnluckySpecialization, NotDivisibleError) as exc:
            last = exc
            log.debug("resultant attempt %d failed: %s", attempt, exc)
            continue
    if perturb and PERTURB_VAR not in polys[0].vars:
        return _perturbed(supports, polys, xvars, seed, max_retries, cap, method)
    raise UnluckySpecialization(str(last) if last else "")


def _perturbed(supports, polys, xvars, seed, max_retries, cap, method):
    field = polys[0].field
    vars = polys[0].vars + (PERTURB_VAR,)
    t = Poly.variable(PERTURB_VAR, vars, field)
    rng = random.Random(seed * 13 + 5)
    xidx = [vars.index(v) for v in xvars]
    new = []
    for f, A in zip(polys, supports):
        g = f.with_vars(vars)
        terms = {}
        for a in A:
            e = [0] * len(vars)
            for k, x in zip(xidx, a):
                e[k] = x
            c = field.random_element(rng, 97)
            while not c:
                c = field.random_element(rng, 97)
            terms[tuple(e)] = c
        new.append(g + t * Poly(vars, terms, field))
    rv = toric_resultant(supports, new, xvars, seed, max_retries, cap, method, perturb=False)
    at0 = rv.poly.subs({PERTURB_VAR: 0})
    keep = tuple(v for v in vars if v != PERTURB_VAR)
    at0 = at0.with_vars(keep)
    scalar, norm = at0.normalized()
    return ResultantValue(norm, scalar * rv.scalar if norm else field.zero, supports,
                          rv.matrix_size, rv.method, seed, rv.attempt, perturbed=True)
