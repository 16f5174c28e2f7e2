"""Lattice point configurations, hull facets, normal-face representatives,
volumes and lifting-induced mixed subdivisions (ambient dimension <= 4).
"""
from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

MAX_DIM = 4
LIFT_RANGE = 2 ** 16

Point = tuple


class GeometryError(ValueError):
    pass


class DegenerateLiftingError(GeometryError):
    pass


def as_support(points: Iterable[Sequence[int]], allow_empty: bool = False) -> tuple:
    """Canonical form of a support: sorted tuple of distinct integer tuples."""
    pts = sorted({tuple(int(c) for c in p) for p in points})
    if not pts and not allow_empty:
        raise GeometryError("empty support")
    if len({len(p) for p in pts}) > 1:
        raise GeometryError("points of different dimensions")
    return tuple(pts)


def as_tuple(supports: Iterable, allow_empty: bool = False) -> tuple:
    t = tuple(as_support(s, allow_empty=allow_empty) for s in supports)
    dims = {len(s[0]) for s in t if s}
    if len(dims) > 1:
        raise GeometryError("supports of different ambient dimensions")
    return t


def ambient_dim(t: Sequence) -> int:
    for s in t:
        if s:
            return len(s[0])
    raise GeometryError("cannot infer ambient dimension from empty supports")


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _rank(rows: list) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def dim_of(s: Iterable[Sequence[int]]) -> int:
    """Dimension of the affine span of a nonempty point set."""
    s = as_support(s)
    p0 = s[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in s[1:]]
    return _rank(diffs) if diffs else 0


def face(s: Iterable[Sequence[int]], w: Sequence) -> tuple:
    """Points of ``s`` minimizing the inner product with ``w``."""
    s = as_support(s)
    vals = [dot(p, w) for p in s]
    lo = min(vals)
    return tuple(p for p, v in zip(s, vals) if v == lo)


def minkowski_sum(ss: Sequence[Iterable[Sequence[int]]]) -> tuple:
    """Pointwise sum set, deduplicated (no hull is taken)."""
    ss = [as_support(s) for s in ss]
    if not ss:
        raise GeometryError("empty list of supports")
    acc = {ss[0][i] for i in range(len(ss[0]))}
    for s in ss[1:]:
        acc = {tuple(x + y for x, y in zip(a, b)) for a in acc for b in s}
    return as_support(acc)


# ---------------------------------------------------------------------------
# convex hulls with exact facet data

@dataclass(frozen=True)
class Facet:
    normal: tuple      # primitive integer inner normal
    offset: int        # min of <normal, x> over the polytope
    vertices: frozenset


@dataclass(frozen=True)
class Hull:
    dim: int
    vertices: tuple
    facets: tuple
    simplices: tuple   # boundary triangulation, tuples of points


def _primitive(v):
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    return tuple(int(x) // g for x in v) if g else tuple(int(x) for x in v)


def _hyperplane_normal(pts: Sequence) -> tuple:
    """Integer normal of the hyperplane through n points in R^n (cofactor vector)."""
    p0 = pts[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    n = len(p0)
    normal = []
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows]
        d = _int_det(minor)
        normal.append(d if j % 2 == 0 else -d)
    return _primitive(normal)


def _int_det(m) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [r[:j] + r[j + 1:] for r in m[1:]]
            total += (-1) ** j * m[0][j] * _int_det(minor)
    return total


def convex_hull(points: Iterable[Sequence[int]]) -> Hull:
    """Exact facet description of a full-dimensional lattice polytope.

    Qhull proposes the combinatorics; every facet normal and offset is then
    recomputed and checked in integer arithmetic.
    """
    pts = as_support(points)
    n = len(pts[0])
    if n > MAX_DIM:
        raise GeometryError("unsupported dimension")
    if dim_of(pts) < n:
        raise GeometryError("polytope is not full-dimensional")
    if n == 1:
        lo, hi = pts[0], pts[-1]
        facets = (Facet((1,), lo[0], frozenset([lo])), Facet((-1,), -hi[0], frozenset([hi])))
        return Hull(1, (lo, hi), facets, ((lo,), (hi,)))
    try:
        qh = ConvexHull(np.array(pts, dtype=float), qhull_options="Qt")
    except QhullError as exc:
        raise GeometryError(f"hull computation failed: {exc}") from None
    verts = tuple(sorted(pts[i] for i in qh.vertices))
    centroid = [Fraction(sum(v[k] for v in verts), len(verts)) for k in range(n)]
    facets = {}
    simplices = []
    for simplex in qh.simplices:
        spts = [pts[i] for i in simplex]
        simplices.append(tuple(spts))
        nv = _hyperplane_normal(spts)
        if not any(nv):
            continue
        off = dot(nv, spts[0])
        if dot(nv, centroid) < off:
            nv = tuple(-x for x in nv)
            off = -off
        if nv in facets:
            continue
        if any(dot(nv, p) < off for p in verts):
            raise GeometryError("inexact hull facet")
        facets[nv] = Facet(nv, off, frozenset(v for v in verts if dot(nv, v) == off))
    return Hull(n, verts, tuple(facets[k] for k in sorted(facets)), tuple(simplices))


def volume(s: Iterable[Sequence[int]]) -> Fraction:
    """Euclidean volume of Conv(s); zero when lower-dimensional."""
    pts = as_support(s)
    n = len(pts[0])
    if n > MAX_DIM:
        raise GeometryError("unsupported dimension")
    if dim_of(pts) < n:
        return Fraction(0)
    h = convex_hull(pts)
    if n == 1:
        return Fraction(h.vertices[1][0] - h.vertices[0][0])
    c = [Fraction(sum(v[k] for v in h.vertices), len(h.vertices)) for k in range(n)]
    total = Fraction(0)
    for simplex in h.simplices:
        rows = [[p[k] - c[k] for k in range(n)] for p in simplex]
        total += abs(_frac_det(rows))
    return total / math.factorial(n)


def _frac_det(rows) -> Fraction:
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            if m[i][k]:
                f = Fraction(m[i][k]) / m[k][k]
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return det


def faces(h: Hull) -> list:
    """All proper nonempty faces, as vertex frozensets."""
    facet_sets = [f.vertices for f in h.facets]
    found = set(facet_sets)
    frontier = list(found)
    while frontier:
        nxt = []
        for a in frontier:
            for b in facet_sets:
                c = a & b
                if c and c not in found:
                    found.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(found, key=lambda f: (len(f), sorted(f)))


def normal_face_reps(ss: Sequence[Iterable[Sequence[int]]]) -> list:
    """One integer inner normal per proper face of the sum of the hulls."""
    total = minkowski_sum(ss)
    n = len(total[0])
    if n > MAX_DIM:
        raise GeometryError("unsupported dimension")
    h = convex_hull(total)
    reps = []
    for f in faces(h):
        w = [0] * n
        for fac in h.facets:
            if f <= fac.vertices:
                w = [a + b for a, b in zip(w, fac.normal)]
        w = _primitive(w)
        if set(face(h.vertices, w)) != set(f):
            raise GeometryError("face normal check failed")
        reps.append(w)
    return sorted(set(reps))


# ---------------------------------------------------------------------------
# liftings and mixed subdivisions

@dataclass(frozen=True)
class MixedCell:
    summands: tuple            # one tuple of points per entry
    normal: tuple              # w with (w, 1) the inner normal of the lifted cell
    type: tuple                # dimension of each summand
    volume: Fraction           # Euclidean volume; fully mixed cells sum to the mixed volume

    @property
    def is_mixed(self) -> bool:
        """Exactly one summand is a point and all others are edges."""
        return sorted(self.type) == [0] + [1] * (len(self.type) - 1)

    @property
    def is_fully_mixed(self) -> bool:
        return all(d == 1 for d in self.type)

    def vertex_sum(self) -> tuple:
        return tuple(sum(s[0][k] for s in self.summands) for k in range(len(self.normal)))


@dataclass(frozen=True)
class MixedSubdivision:
    cells: tuple
    lifting: tuple             # per entry: dict point -> int
    tuple: tuple
    seed: int
    attempt: int = 0

    @property
    def mixed_cells(self) -> tuple:
        return tuple(c for c in self.cells if c.is_fully_mixed)


def random_lifting(t: Sequence, seed: int, attempt: int = 0) -> tuple:
    rng = random.Random(seed * 1_000_003 + attempt)
    return tuple({p: rng.randrange(LIFT_RANGE) for p in s} for s in t)


def _solve(mat, rhs):
    """Exact solution of a square nonsingular system, or None if singular."""
    n = len(mat)
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(mat, rhs)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return None
        m[k], m[piv] = m[piv], m[k]
        inv = 1 / m[k][k]
        m[k] = [x * inv for x in m[k]]
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k]
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return tuple(m[i][n] for i in range(n))


def _compositions(n, caps):
    if not caps:
        if n == 0:
            yield ()
        return
    for k in range(min(n, caps[0]) + 1):
        for rest in _compositions(n - k, caps[1:]):
            yield (k,) + rest


def _lower_face_sets(s, lift):
    """Vertex sets of the lower facets of the lifted points, or None.

    Only used to prune candidates; every candidate is still checked exactly.
    """
    n = len(s[0])
    if len(s) < n + 2 or dim_of(s) < n:
        return None
    pts = np.array([list(p) + [lift[p]] for p in s], dtype=float)
    try:
        h = ConvexHull(pts, qhull_options="Qt")
    except QhullError:
        return None
    groups = {}
    for simplex, eq in zip(h.simplices, h.equations):
        if eq[n] >= -1e-9:
            continue
        key = tuple(np.round(eq / -eq[n], 6))
        groups.setdefault(key, set()).update(int(k) for k in simplex)
    return [sorted(g) for g in groups.values()]


def _candidates(s, k, faces_):
    if faces_ is None:
        return itertools.combinations(s, k + 1)
    seen = set()
    for g in faces_:
        for c in itertools.combinations(g, k + 1):
            seen.add(c)
    return (tuple(s[j] for j in c) for c in sorted(seen))


def _cells_for_lifting(t, lifting, n, types=None, prune=True):
    cells = []
    caps = [len(s) - 1 for s in t]
    lower = [_lower_face_sets(s, l) if prune else None for s, l in zip(t, lifting)]
    for typ in (types if types is not None else _compositions(n, caps)):
        choices = [list(_candidates(s, k, f)) for s, k, f in zip(t, typ, lower)]
        for combo in itertools.product(*choices):
            rows, rhs = [], []
            for i, b in enumerate(combo):
                b0 = b[0]
                for q in b[1:]:
                    rows.append([x - y for x, y in zip(q, b0)])
                    rhs.append(lifting[i][b0] - lifting[i][q])
            d = _int_det(rows)
            if d == 0:
                continue
            w = _solve(rows, rhs)
            # scale to integers so the argmin test stays in int arithmetic
            L = math.lcm(*(x.denominator for x in w))
            W = [int(x * L) for x in w]
            ok = True
            for i, b in enumerate(combo):
                li = lifting[i]
                target = dot(b[0], W) + L * li[b[0]]
                for a in t[i]:
                    v = dot(a, W) + L * li[a]
                    if v < target:
                        ok = False
                        break
                    if v == target and a not in b:
                        raise DegenerateLiftingError("lifting is not generic")
                if not ok:
                    break
            if ok:
                denom = 1
                for k in typ:
                    denom *= math.factorial(k)
                cells.append(MixedCell(tuple(combo), w, tuple(typ), Fraction(abs(d), denom)))
    return cells


def _covering_cells(t, lifting, n):
    """All cells, pruned when the pruned cells provably tile the sum."""
    cells = _cells_for_lifting(t, lifting, n)
    if sum(c.volume for c in cells) != volume(minkowski_sum(t)):
        cells = _cells_for_lifting(t, lifting, n, prune=False)
    return cells


def mixed_subdivision(t: Sequence, seed: int = 0, max_retries: int = 20,
                      check: bool = True) -> MixedSubdivision:
    """Fine coherent mixed subdivision of the Minkowski sum from a random lifting."""
    t = as_tuple(t)
    n = ambient_dim(t)
    if n > MAX_DIM:
        raise GeometryError("unsupported dimension")
    total = minkowski_sum(t)
    if dim_of(total) < n:
        raise GeometryError("Minkowski sum is not full-dimensional")
    for attempt in range(max_retries):
        lifting = random_lifting(t, seed, attempt)
        try:
            cells = _covering_cells(t, lifting, n)
        except DegenerateLiftingError:
            continue
        sub = MixedSubdivision(tuple(cells), lifting, t, seed, attempt)
        if check:
            expect = volume(total)
            got = sum(c.volume for c in cells)
            if got != expect:
                raise GeometryError(f"cell volumes {got} do not cover the sum ({expect})")
        return sub
    raise DegenerateLiftingError(
        f"degenerate liftings: {max_retries} attempts from seed {seed} failed")


def mixed_volume(t: Sequence, seed: int = 0, max_retries: int = 20) -> int:
    """Lattice-normalized mixed volume via the fully mixed cells of a lifting."""
    return _mixed_volume(as_tuple(t), seed, max_retries)


@functools.lru_cache(maxsize=4096)
def _mixed_volume(t: tuple, seed: int, max_retries: int) -> int:
    n = ambient_dim(t)
    if len(t) != n:
        raise GeometryError(f"need {n} supports in dimension {n}, got {len(t)}")
    if any(len(s) < 2 for s in t):
        return 0
    for attempt in range(max_retries):
        lifting = random_lifting(t, seed, attempt)
        try:
            cells = _covering_cells(t, lifting, n)
        except DegenerateLiftingError:
            continue
        return int(sum(c.volume for c in cells if c.is_fully_mixed))
    raise DegenerateLiftingError(
        f"degenerate liftings: {max_retries} attempts from seed {seed} failed")


def mixed_volume_oracle(t: Sequence) -> int:
    """Inclusion-exclusion over partial Minkowski sums (independent check)."""
    t = as_tuple(t)
    n = ambient_dim(t)
    total = Fraction(0)
    for r in range(1, n + 1):
        for sub in itertools.combinations(range(n), r):
            total += (-1) ** (n - r) * volume(minkowski_sum([t[i] for i in sub]))
    if total.denominator != 1:
        raise GeometryError(f"non-integral mixed volume {total}")
    return int(total)
