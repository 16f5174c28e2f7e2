"""Sparse multivariate polynomials over an exact field.

A :class:`Poly` is a map from exponent tuples to nonzero coefficients on an
ordered tuple of variable names. Values are never mutated after
construction. Printing and "leading term" use graded lexicographic order on
the declared variable order.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .field import QQ, PrimeField, field_from_spec


class PolyError(ValueError):
    pass


class NotDivisibleError(PolyError):
    def __init__(self, msg="not exactly divisible"):
        super().__init__(msg)


def grlex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    __slots__ = ("vars", "terms", "field", "_mod")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, object] | None = None,
                 field=QQ, _clean: bool = False):
        self.vars = tuple(vars)
        self.field = field
        self._mod = field.p if isinstance(field, PrimeField) else None
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            n = len(self.vars)
            clean = {}
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != n:
                    raise PolyError(f"exponent {e} has wrong length for {self.vars}")
                if any(x < 0 for x in e):
                    raise PolyError(f"negative exponent {e}")
                c = field(c)
                if c:
                    c = clean.get(e, field.zero) + c
                    if self._mod is not None:
                        c %= self._mod
                    if c:
                        clean[e] = c
                    else:
                        clean.pop(e, None)
            self.terms = clean

    # -- construction -------------------------------------------------
    @classmethod
    def constant(cls, c, vars: Sequence[str] = (), field=QQ) -> "Poly":
        return cls(vars, {(0,) * len(vars): c}, field)

    @classmethod
    def variable(cls, name: str, vars: Sequence[str], field=QQ) -> "Poly":
        vars = tuple(vars)
        e = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise PolyError(f"{name} not among {vars}")
        return cls(vars, {e: field.one}, field, _clean=True)

    @classmethod
    def monomial(cls, exp: Sequence[int], c, vars: Sequence[str], field=QQ) -> "Poly":
        return cls(vars, {tuple(exp): c}, field)

    def _new(self, terms) -> "Poly":
        return Poly(self.vars, terms, self.field, _clean=True)

    def zero_like(self) -> "Poly":
        return self._new({})

    # -- basic queries ------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return (self.vars == other.vars and self.field == other.field
                    and self.terms == other.terms)
        if isinstance(other, (int, Fraction)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        return self.terms.get((0,) * len(self.vars), self.field.zero)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str | None = None) -> int:
        if var is None:
            return self.total_degree()
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def min_degree(self, var: str) -> int:
        i = self.vars.index(var)
        return min((e[i] for e in self.terms), default=-1)

    def degree_in(self, names: Iterable[str]) -> int:
        idx = [self.vars.index(v) for v in names]
        return max((sum(e[i] for i in idx) for e in self.terms), default=-1)

    def is_homogeneous(self, names: Iterable[str] | None = None) -> bool:
        idx = range(len(self.vars)) if names is None else [self.vars.index(v) for v in names]
        degs = {sum(e[i] for i in idx) for e in self.terms}
        return len(degs) <= 1

    def used_vars(self) -> tuple:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    # -- ring embedding -----------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> "Poly":
        """Re-express over another variable tuple (must cover used variables)."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vars)}
        for v in self.used_vars():
            if v not in pos:
                raise PolyError(f"variable {v} missing from {vars}")
        idx = [(pos[v], i) for i, v in enumerate(self.vars) if v in pos]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for j, i in idx:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return Poly(vars, out, self.field, _clean=True)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars or other.field != self.field:
                raise PolyError("incompatible rings")
            return other
        return Poly.constant(other, self.vars, self.field)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        mod = self._mod
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if mod is not None:
                    v %= mod
                if v:
                    out[e] = v
                else:
                    del out[e]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        if self._mod is not None:
            return self._new({e: (-c) % self._mod for e, c in self.terms.items()})
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = self.field(c)
        if not c:
            return self.zero_like()
        if self._mod is not None:
            return self._new({e: v * c % self._mod for e, v in self.terms.items()})
        return self._new({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        mod = self._mod
        if mod is not None:
            out = {e: c % mod for e, c in out.items() if c % mod}
        else:
            out = {e: c for e, c in out.items() if c}
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power")
        result = self._coerce(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divexact(self, other: "Poly") -> "Poly":
        """Return q with ``self == q * other``; raise NotDivisibleError otherwise."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        le, lc = other.leading_term()
        inv = self.field.inv(lc)
        rest = [(e, c) for e, c in other.terms.items() if e != le]
        rem = dict(self.terms)
        quot = {}
        mod = self._mod
        while rem:
            e = max(rem, key=grlex_key)
            c = rem[e]
            d = tuple(x - y for x, y in zip(e, le))
            if any(x < 0 for x in d):
                raise NotDivisibleError()
            q = c * inv
            if mod is not None:
                q %= mod
            quot[d] = q
            del rem[e]
            for eo, co in rest:
                t = tuple(x + y for x, y in zip(d, eo))
                v = rem.get(t, 0) - q * co
                if mod is not None:
                    v %= mod
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return self._new(quot)

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return self.divexact(other)
        return self.scale(self.field.inv(self.field(other)))

    # -- evaluation and substitution -----------------------------------
    def subs(self, values: Mapping[str, object]) -> "Poly":
        """Substitute field constants for some variables (varset unchanged)."""
        idx = [(self.vars.index(v), self.field(c)) for v, c in values.items() if v in self.vars]
        if not idx:
            return self
        out: dict = {}
        mod = self._mod
        for e, c in self.terms.items():
            ne = list(e)
            for i, val in idx:
                if ne[i]:
                    c = c * val ** ne[i]
                    ne[i] = 0
            if mod is not None:
                c %= mod
            if c:
                ne = tuple(ne)
                out[ne] = out.get(ne, 0) + c
        if mod is not None:
            out = {e: c % mod for e, c in out.items() if c % mod}
        else:
            out = {e: c for e, c in out.items() if c}
        return self._new(out)

    def substitute(self, images: Mapping[str, "Poly"], vars: Sequence[str] | None = None) -> "Poly":
        """Replace variables by polynomials living over ``vars``."""
        vars = tuple(vars) if vars is not None else self.vars
        result = Poly(vars, {}, self.field)
        imgs = [images[v].with_vars(vars) if v in images else Poly.variable(v, vars, self.field)
                for v in self.vars]
        cache: dict = {}
        for e, c in self.terms.items():
            term = Poly.constant(c, vars, self.field)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = imgs[i] ** k
                    term = term * cache[key]
            result = result + term
        return result

    def evaluate(self, point: Sequence) -> object:
        """Evaluate at a full point (one value per variable, in order)."""
        mod = self._mod
        total = 0
        pows = [dict() for _ in point]
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    pk = pows[i].get(k)
                    if pk is None:
                        pk = point[i] ** k if mod is None else pow(point[i], k, mod)
                        pows[i][k] = pk
                    v = v * pk
            total = total + v
        if mod is not None:
            return total % mod
        return Fraction(total)

    def coefficients_in(self, var: str) -> dict:
        """Map power of ``var`` to the coefficient polynomial (same varset)."""
        i = self.vars.index(var)
        out: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[ne] = c
        return {k: self._new(t) for k, t in sorted(out.items())}

    def derivative(self, var: str) -> "Poly":
        i = self.vars.index(var)
        mod = self._mod
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = c * e[i]
                if mod is not None:
                    v %= mod
                if v:
                    out[e[:i] + (e[i] - 1,) + e[i + 1:]] = v
        return self._new(out)

    # -- normalization ------------------------------------------------
    def normalized(self):
        """Return ``(scalar, p)`` with ``self == scalar * p`` and ``p`` canonical.

        Over Q ``p`` has coprime integer coefficients and a positive leading
        coefficient; over GF(p) ``p`` is monic. The zero polynomial maps to
        ``(0, 0)``.
        """
        if not self.terms:
            return self.field.zero, self
        _, lc = self.leading_term()
        if self._mod is not None:
            return lc, self.scale(self.field.inv(lc))
        den = reduce(math.lcm, (c.denominator for c in self.terms.values()), 1)
        num = reduce(math.gcd, (c.numerator for c in self.terms.values()), 0)
        scalar = Fraction(num, den)
        if lc < 0:
            scalar = -scalar
        return scalar, self.scale(Fraction(1) / scalar)

    def monic(self) -> "Poly":
        _, lc = self.leading_term()
        return self.scale(self.field.inv(lc))

    # -- printing and serialization ------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            cs = self.field.to_str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({str(self)!r}, vars={self.vars})"

    def to_json(self) -> dict:
        return {"vars": list(self.vars),
                "terms": [{"exp": list(e), "coeff": self.field.to_str(c)}
                          for e, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data: Mapping, field=QQ) -> "Poly":
        field = field_from_spec(field)
        try:
            vars = data["vars"]
            terms = {}
            for t in data["terms"]:
                e = tuple(t["exp"])
                c = field(str(t["coeff"]))
                terms[e] = field(terms.get(e, field.zero) + c)
        except (KeyError, TypeError) as exc:
            raise PolyError(f"malformed polynomial JSON: {exc}") from None
        return cls(vars, terms, field)

    @classmethod
    def parse(cls, text: str, vars: Sequence[str], field=QQ) -> "Poly":
        """Parse expressions like ``"1 + 2*x - 3/2*x^2*y"`` (sums of monomials)."""
        vars = tuple(vars)
        s = text.replace(" ", "").replace("**", "^")
        if not s:
            raise PolyError("empty polynomial text")
        if s[0] not in "+-":
            s = "+" + s
        terms: dict = {}
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            coeff = Fraction(1)
            exp = [0] * len(vars)
            for factor in body.split("*"):
                if "^" in factor:
                    name, k = factor.split("^")
                    k = int(k)
                else:
                    name, k = factor, 1
                if name in vars:
                    exp[vars.index(name)] += k
                else:
                    try:
                        coeff *= Fraction(name) ** k
                    except ValueError:
                        raise PolyError(f"unknown symbol {name!r}") from None
            if sign == "-":
                coeff = -coeff
            e = tuple(exp)
            terms[e] = terms.get(e, 0) + coeff
        return cls(vars, terms, field)


def support_of(p: Poly, names: Sequence[str] | None = None) -> list:
    """Exponent vectors (restricted to ``names``) of the monomials of ``p``."""
    if names is None:
        return sorted(p.terms)
    idx = [p.vars.index(v) for v in names]
    return sorted({tuple(e[i] for i in idx) for e in p.terms})


def split_by_monomial(p: Poly, names: Sequence[str], coeff_vars: Sequence[str]) -> dict:
    """View ``p`` as a polynomial in ``names`` with coefficients over ``coeff_vars``."""
    idx = [p.vars.index(v) for v in names]
    cidx = [p.vars.index(v) for v in coeff_vars]
    out: dict = {}
    for e, c in p.terms.items():
        key = tuple(e[i] for i in idx)
        ce = tuple(e[i] for i in cidx)
        out.setdefault(key, {})[ce] = c
    return {k: Poly(coeff_vars, t, p.field, _clean=True) for k, t in out.items()}
