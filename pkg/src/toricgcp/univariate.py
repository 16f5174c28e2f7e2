"""Dense univariate arithmetic and root extraction over Q and GF(p).

Polynomials here are coefficient lists, lowest degree first, with no
trailing zeros. :func:`univ_roots` is the public entry point and works on
:class:`~toricgcp.poly.Poly` values.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .field import PrimeField
from .poly import Poly, PolyError


class _Ops:
    """Coefficient arithmetic for one field."""

    def __init__(self, field):
        self.field = field
        self.p = field.p if isinstance(field, PrimeField) else None

    def n(self, x):
        return x % self.p if self.p is not None else x

    def inv(self, x):
        return self.field.inv(x)

    def trim(self, a):
        a = [self.n(x) for x in a]
        while a and not a[-1]:
            a.pop()
        return a

    def sub(self, a, b):
        m = max(len(a), len(b))
        return self.trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                          for i in range(m)])

    def mul(self, a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self.trim(out)

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        a = list(a)
        inv = self.inv(b[-1])
        db = len(b) - 1
        q = [0] * max(len(a) - db, 0)
        for k in range(len(a) - 1, db - 1, -1):
            c = self.n(a[k] * inv)
            if c:
                q[k - db] = c
                for j in range(db + 1):
                    a[k - db + j] = self.n(a[k - db + j] - c * b[j])
        return self.trim(q), self.trim(a[:db])

    def monic(self, a):
        inv = self.inv(a[-1])
        return [self.n(x * inv) for x in a]

    def gcd(self, a, b):
        a, b = self.trim(a), self.trim(b)
        while b:
            a, b = b, self.divmod(a, b)[1]
        return self.monic(a) if a else a

    def deriv(self, a):
        return self.trim([i * a[i] for i in range(1, len(a))])

    def powmod(self, base, e, mod):
        result = [1]
        base = self.divmod(base, mod)[1]
        while e:
            if e & 1:
                result = self.divmod(self.mul(result, base), mod)[1]
            base = self.divmod(self.mul(base, base), mod)[1]
            e >>= 1
        return result

    def eval(self, a, x):
        v = 0
        for c in reversed(a):
            v = self.n(v * x + c)
        return v


def _distinct_roots_mod_p(f: list, p: int, rng: random.Random) -> list:
    """All roots in GF(p) of ``f`` (coefficients already reduced mod p)."""
    ops = _Ops(PrimeField(p, allow_small=True)) if p > 3 else None
    if ops is None or p < 64:
        return [x for x in range(p) if _horner_mod(f, x, p) == 0]
    f = ops.monic(f)
    xp = ops.powmod([0, 1], p, f)
    g = ops.gcd(f, ops.sub(xp, [0, 1]))
    roots = []
    stack = [g]
    while stack:
        h = stack.pop()
        d = len(h) - 1
        if d <= 0:
            continue
        if d == 1:
            roots.append((-h[0] * ops.inv(h[1])) % p)
            continue
        while True:
            a = rng.randrange(p)
            w = ops.powmod([a, 1], (p - 1) // 2, h)
            k = ops.gcd(h, ops.sub(w, [1]))
            if 0 < len(k) - 1 < d:
                stack.append(k)
                stack.append(ops.divmod(h, k)[0])
                break
    return sorted(roots)


def _horner_mod(f, x, p):
    v = 0
    for c in reversed(f):
        v = (v * x + c) % p
    return v


def _ratrec(r: int, m: int, nbound: int, dbound: int):
    """Rational reconstruction: a/b ≡ r (mod m) with |a| <= nbound, 0 < b <= dbound."""
    r0, r1 = m, r % m
    s0, s1 = 0, 1
    while r1 > nbound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0:
        return None
    a, b = r1, s1
    if b < 0:
        a, b = -a, -b
    if b > dbound or math.gcd(a, b) != 1:
        return None
    return Fraction(a, b)


def _next_prime(k: int) -> int:
    def isprime(x):
        if x < 2:
            return False
        for d in range(2, int(math.isqrt(x)) + 1):
            if x % d == 0:
                return False
        return True
    while not isprime(k):
        k += 1
    return k


def _rational_roots_squarefree(f: list, rng: random.Random) -> list:
    """Rational roots of a squarefree polynomial with Fraction coefficients.

    Roots are found modulo a good prime, lifted p-adically past the size
    bound implied by the leading and trailing coefficients, reconstructed
    and checked exactly.
    """
    den = 1
    for c in f:
        den = math.lcm(den, Fraction(c).denominator)
    g = [int(Fraction(c) * den) for c in f]
    roots = []
    while g and g[0] == 0:
        g = g[1:]
        roots.append(Fraction(0))
    if len(g) <= 1:
        return roots
    cont = math.gcd(*g)
    g = [c // cont for c in g]
    lc, tc = abs(g[-1]), abs(g[0])
    dg = [i * g[i] for i in range(1, len(g))]
    q = 10007
    while True:
        q = _next_prime(q + 1)
        if g[-1] % q == 0:
            continue
        ops = _Ops(PrimeField(q))
        gm = ops.trim(g)
        if len(ops.gcd(gm, ops.trim(dg))) == 1:
            break
    mod_roots = _distinct_roots_mod_p(ops.trim(g), q, rng)
    bound = 2 * tc * lc + 1
    for r in mod_roots:
        m = q
        while m <= bound:
            m2 = m * m
            gv = _horner_mod(g, r, m2)
            dv = _horner_mod(dg, r, m2)
            r = (r - gv * pow(dv, -1, m2)) % m2
            m = m2
        cand = _ratrec(r, m, tc, lc)
        if cand is not None and _eval_exact(g, cand) == 0:
            roots.append(cand)
    return sorted(set(roots))


def _eval_exact(g, x):
    v = Fraction(0)
    for c in reversed(g):
        v = v * x + c
    return v


def univ_roots(p: Poly, seed: int = 0):
    """Roots of a univariate polynomial in its coefficient field.

    Returns ``(roots, remainder)`` where ``roots`` is a list of
    ``(root, multiplicity)`` sorted by root and ``remainder`` is the monic
    product of the factors with no root in the field, as a :class:`Poly`
    over the same variables. ``p == lc(p) * prod((t - r)**m) * remainder``.
    """
    used = p.used_vars()
    if not p:
        raise PolyError("univ_roots of the zero polynomial")
    if len(used) > 1:
        raise PolyError(f"not univariate: {used}")
    var = used[0] if used else p.vars[0] if p.vars else None
    field = p.field
    ops = _Ops(field)
    if var is None:
        return [], Poly.constant(1, p.vars, field)
    i = p.vars.index(var)
    deg = p.degree(var)
    f = [field.zero] * (deg + 1)
    for e, c in p.terms.items():
        f[e[i]] = c
    f = ops.trim(f)
    rng = random.Random(seed)
    sqf = ops.divmod(f, ops.gcd(f, ops.deriv(f)))[0] if len(f) > 2 else f
    if ops.p is not None:
        if ops.p > 3:
            cands = _distinct_roots_mod_p(ops.monic(sqf), ops.p, rng)
        else:
            cands = [x for x in range(ops.p) if ops.eval(f, x) == 0]
    else:
        cands = _rational_roots_squarefree(sqf, rng)
    rest = ops.monic(f)
    roots = []
    for r in cands:
        lin = ops.trim([-r, 1])
        mult = 0
        while True:
            q, rem = ops.divmod(rest, lin)
            if rem:
                break
            rest = q
            mult += 1
        if mult:
            roots.append((r, mult))
    terms = {}
    for k, c in enumerate(rest):
        if c:
            e = [0] * len(p.vars)
            e[i] = k
            terms[tuple(e)] = c
    return roots, Poly(p.vars, terms, field)
