"""
Exact multivariate polynomials over the Gaussian rationals.

Variables are the canonical coordinates ``(q1..qn, p1..pn)``; a monomial is a
dense exponent tuple of length ``2n`` in that order.  Coefficients are
:class:`GaussRational` so that the complex phase basis ``z_j = q_j + i p_j``
used by the averaging operators needs no separate coefficient type.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError

Rational = Fraction

Monomial = tuple  # tuple[int, ...] of length 2n


def _frac(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        return cls._raw(_frac(x), Fraction(0))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "GaussRational":
        return GaussRational._raw(self.re, -self.im)

    def __add__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussRational.coerce(other) - self

    def __neg__(self):
        return GaussRational._raw(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussRational.coerce(other)
        if not o.im:
            return GaussRational._raw(self.re * o.re, self.im * o.re)
        if not self.im:
            return GaussRational._raw(self.re * o.re, self.re * o.im)
        return GaussRational._raw(self.re * o.re - self.im * o.im,
                                  self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussRational.coerce(other)
        if not o:
            raise ZeroDivisionError("division by zero Gaussian rational")
        if not o.im:
            return GaussRational._raw(self.re / o.re, self.im / o.re)
        d = o.re * o.re + o.im * o.im
        return self * GaussRational._raw(o.re / d, -o.im / d)

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) / self

    def __pow__(self, k: int):
        result = GaussRational(1)
        base = self
        if k < 0:
            base = GaussRational(1) / base
            k = -k
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        return f"({self.re} + {self.im}*i)"


I = GaussRational(0, 1)
_ZERO = Fraction(0)


def _coef(x) -> GaussRational:
    return GaussRational.coerce(x)


def var_name(n: int, index: int) -> str:
    """Name of canonical variable ``index`` in dimension ``n`` (``q1`` .. ``pn``)."""
    if index < n:
        return f"q{index + 1}"
    return f"p{index - n + 1}"


def display_key(n: int):
    """Sort key realising graded lex order with q1 < p1 < q2 < p2 < ...

    Larger keys print first.
    """
    def key(mono):
        interleaved = []
        for j in range(n - 1, -1, -1):
            interleaved.append(mono[n + j])
            interleaved.append(mono[j])
        return (sum(mono), tuple(interleaved))
    return key


class Poly:
    """Sparse polynomial in ``(q1..qn, p1..pn)`` with Gaussian-rational coefficients.

    Instances are treated as immutable.  Zero coefficients are never stored,
    so structural equality of the term maps is polynomial equality.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | None = None):
        if n < 1:
            raise ValueError("dimension n must be positive")
        self.n = n
        clean = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != 2 * n:
                    raise DimensionError(
                        f"monomial {mono} has length {len(mono)}, expected {2 * n}")
                c = _coef(c)
                if c:
                    clean[mono] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, n: int, terms: dict) -> "Poly":
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._from_clean(n, {})

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        return cls(n, {(0,) * (2 * n): c})

    @classmethod
    def var(cls, n: int, index: int) -> "Poly":
        if not 0 <= index < 2 * n:
            raise IndexError(f"variable index {index} out of range for n={n}")
        mono = [0] * (2 * n)
        mono[index] = 1
        return cls(n, {tuple(mono): 1})

    @classmethod
    def q(cls, n: int, j: int) -> "Poly":
        """``q_j`` with 1-based ``j``."""
        return cls.var(n, j - 1)

    @classmethod
    def p(cls, n: int, j: int) -> "Poly":
        """``p_j`` with 1-based ``j``."""
        return cls.var(n, n + j - 1)

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_real(self) -> bool:
        return all(not c.im for c in self.terms.values())

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def homogeneous_components(self) -> dict[int, "Poly"]:
        parts: dict[int, dict] = {}
        for mono, c in self.terms.items():
            parts.setdefault(sum(mono), {})[mono] = c
        return {d: Poly._from_clean(self.n, t) for d, t in sorted(parts.items())}

    def coefficient(self, mono: Sequence[int]) -> GaussRational:
        return self.terms.get(tuple(mono), GaussRational(0))

    def real_part(self) -> "Poly":
        return Poly(self.n, {m: c.re for m, c in self.terms.items()})

    def conjugate(self) -> "Poly":
        return Poly._from_clean(self.n, {m: c.conjugate() for m, c in self.terms.items()})

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Poly"):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: n={self.n} vs n={other.n}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono)
            s = c if s is None else s + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly._from_clean(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._from_clean(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Poly":
        c = _coef(c)
        if not c:
            return Poly.zero(self.n)
        return Poly._from_clean(self.n, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(mono)
                out[mono] = c1 * c2 if s is None else s + c1 * c2
        return Poly._from_clean(self.n, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if other.degree() > 0 or other.is_zero():
                raise ValueError("polynomial division only by nonzero constants")
            other = other.coefficient((0,) * (2 * self.n))
        c = _coef(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale(GaussRational(1) / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def partial(self, index: int) -> "Poly":
        if not 0 <= index < 2 * self.n:
            raise IndexError(f"variable index {index} out of range for n={self.n}")
        out = {}
        for mono, c in self.terms.items():
            e = mono[index]
            if e:
                m = list(mono)
                m[index] = e - 1
                out[tuple(m)] = c * e
        return Poly._from_clean(self.n, out)

    def evaluate(self, point: Sequence, real: bool = True):
        """Evaluate at ``point`` (length ``2n``).

        Exact (Fraction) inputs give an exact result; floats give a float with
        coefficients converted at the last moment.  With ``real=True`` the
        polynomial must have real coefficients.
        """
        if len(point) != 2 * self.n:
            raise DimensionError(f"point has length {len(point)}, expected {2 * self.n}")
        if real and not self.is_real():
            raise ValueError("non-real polynomial evaluated in real mode")
        exact = all(isinstance(x, (int, _RationalABC)) for x in point)
        total = Fraction(0) if exact else 0.0
        for mono, c in self.terms.items():
            v = 1
            for x, e in zip(point, mono):
                if e:
                    v = v * x ** e
            if real:
                coef = c.re if exact else float(c.re)
            else:
                coef = c if exact else complex(c)
            total = total + coef * v
        return total

    # -- protocol ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, _RationalABC, GaussRational)):
            return self == Poly.const(self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        """Terms in canonical display order (graded lex, highest first)."""
        return sorted(self.terms.items(), key=lambda mc: display_key(self.n)(mc[0]),
                      reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly(n={self.n}, {format_poly(self)!r})"


def _format_coeff(c: GaussRational) -> str:
    if not c.im:
        return str(c.re)
    return f"({c})"


def format_monomial(mono: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_terms(items, names: Sequence[str]) -> str:
    """Render ``(monomial, coefficient)`` pairs with the grammar the parser reads."""
    out = []
    for mono, c in items:
        m = format_monomial(mono, names)
        if c.im:
            body = f"({c})" + (f"*{m}" if m else "")
            out.append(("+", body))
            continue
        r = c.re
        sign = "-" if r < 0 else "+"
        a = abs(r)
        if not m:
            body = str(a)
        elif a == 1:
            body = m
        elif a.denominator == 1:
            body = f"{a.numerator}*{m}"
        elif a.numerator == 1:
            body = f"{m}/{a.denominator}"
        else:
            body = f"{a.numerator}*{m}/{a.denominator}"
        out.append((sign, body))
    if not out:
        return "0"
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def format_poly(f: Poly) -> str:
    """Render ``f`` with variables ``q1..qn, p1..pn`` in canonical term order."""
    names = [var_name(f.n, i) for i in range(2 * f.n)]
    return format_terms(f.sorted_terms(), names)


# -- functional API ---------------------------------------------------------

def add(f: Poly, g: Poly) -> Poly:
    return f + g


def mul(f: Poly, g: Poly) -> Poly:
    return f * g


def partial(f: Poly, index: int) -> Poly:
    return f.partial(index)


def evaluate(f: Poly, point: Sequence, real: bool = True):
    return f.evaluate(point, real=real)


# -- complex phase basis ------------------------------------------------------

class ComplexBasisPoly:
    """``sum c_ab z^a zbar^b`` with ``z_j = q_j + i p_j``.

    ``terms`` maps ``(a, b)`` pairs of length-``n`` exponent tuples to
    :class:`GaussRational` coefficients.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        self.terms = {}
        for (a, b), c in (terms or {}).items():
            c = _coef(c)
            if c:
                self.terms[(tuple(a), tuple(b))] = c

    def is_self_conjugate(self) -> bool:
        for (a, b), c in self.terms.items():
            other = self.terms.get((b, a))
            if other is None or other != c.conjugate():
                return False
        return True

    def map_terms(self, fn) -> "ComplexBasisPoly":
        """New polynomial with ``c_ab`` replaced by ``fn(a, b, c_ab)``."""
        return ComplexBasisPoly(self.n, {ab: fn(ab[0], ab[1], c) for ab, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, ComplexBasisPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __repr__(self):
        names = [f"z{j + 1}" for j in range(self.n)] + [f"zbar{j + 1}" for j in range(self.n)]
        items = sorted(((a + b, c) for (a, b), c in self.terms.items()), reverse=True)
        return f"ComplexBasisPoly(n={self.n}, {format_terms(items, names)!r})"


_HALF = Fraction(1, 2)


@lru_cache(maxsize=None)
def _qp_to_z(alpha: int, beta: int) -> tuple:
    """``q^alpha p^beta`` as ``((s, t, c), ...)`` meaning ``sum c z^s zbar^t``."""
    # q = (z + zbar)/2,  p = -i (z - zbar)/2
    qpart = {}
    for s in range(alpha + 1):
        qpart[s] = Fraction(comb(alpha, s), 2 ** alpha)
    ppart = {}
    pref = (GaussRational(0, -1) * _HALF) ** beta
    for u in range(beta + 1):
        sign = -1 if (beta - u) % 2 else 1
        ppart[u] = pref * (sign * comb(beta, u))
    out: dict = {}
    deg = alpha + beta
    for s, cq in qpart.items():
        for u, cp in ppart.items():
            zs = s + u
            key = (zs, deg - zs)
            out[key] = out.get(key, GaussRational(0)) + cp * cq
    return tuple((s, t, c) for (s, t), c in out.items() if c)


@lru_cache(maxsize=None)
def _z_to_qp(s: int, t: int) -> tuple:
    """``z^s zbar^t`` as ``((alpha, beta, c), ...)`` meaning ``sum c q^alpha p^beta``."""
    out: dict = {}
    for a in range(s + 1):
        ca = GaussRational(0, 1) ** (s - a) * comb(s, a)
        for b in range(t + 1):
            cb = GaussRational(0, -1) ** (t - b) * comb(t, b)
            key = (a + b, s + t - a - b)
            out[key] = out.get(key, GaussRational(0)) + ca * cb
    return tuple((al, be, c) for (al, be), c in out.items() if c)


def _expand_product(factors):
    """Multiply per-variable expansions into a dict keyed by joined exponents."""
    acc = {((), ()): GaussRational(1)}
    for fac in factors:
        nxt: dict = {}
        for (xa, xb), c in acc.items():
            for s, t, cf in fac:
                key = (xa + (s,), xb + (t,))
                v = c * cf
                prev = nxt.get(key)
                nxt[key] = v if prev is None else prev + v
        acc = nxt
    return acc


def to_complex_basis(f: Poly) -> ComplexBasisPoly:
    """Exact change of basis from ``(q, p)`` to ``(z, zbar)``."""
    n = f.n
    out: dict = {}
    for mono, c in f.terms.items():
        factors = [_qp_to_z(mono[j], mono[n + j]) for j in range(n)]
        for key, v in _expand_product(factors).items():
            prev = out.get(key)
            out[key] = c * v if prev is None else prev + c * v
    return ComplexBasisPoly(n, out)


def from_complex_basis(F: ComplexBasisPoly) -> Poly:
    """Inverse of :func:`to_complex_basis`."""
    n = F.n
    out: dict = {}
    for (a, b), c in F.terms.items():
        factors = [_z_to_qp(a[j], b[j]) for j in range(n)]
        for (qs, ps), v in _expand_product(factors).items():
            key = qs + ps
            prev = out.get(key)
            out[key] = c * v if prev is None else prev + c * v
    return Poly(n, out)


def poly_from_terms(n: int, items: Iterable[tuple[Sequence[int], object]]) -> Poly:
    """Build a polynomial from possibly repeated ``(monomial, coeff)`` pairs."""
    acc = Poly.zero(n)
    for mono, c in items:
        acc = acc + Poly(n, {tuple(mono): c})
    return acc
