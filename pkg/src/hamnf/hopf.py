"""
Hopf variables for the 1:1 resonant oscillator in two degrees of freedom.

    w1 = 2(q1 q2 + p1 p2)      w2 = 2(q1 p2 - q2 p1)
    w3 = q1^2 + p1^2 - q2^2 - p2^2
    w4 = q1^2 + q2^2 + p1^2 + p2^2

They generate the invariants of ``H0 = w4/2`` subject to the single relation
``w1^2 + w2^2 + w3^2 = w4^2``, so rewriting an invariant in the ``w`` is not
unique from degree 4 on.  :func:`hopf_rewrite` returns the whole affine
family of rewritings; every free direction becomes a named parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Mapping

from .averaging import FrequencyData, lie_upsilon
from .errors import PreconditionError
from .linalg import solve_affine
from .normalform import NormalFormResult
from .poly import Poly, format_terms

FREQ_11 = FrequencyData((1, 1))
W_NAMES = ("w1", "w2", "w3", "w4")
PARAM_PREFIX = "lam"


def hopf_generators() -> tuple[Poly, Poly, Poly, Poly]:
    q1, q2, p1, p2 = Poly.q(2, 1), Poly.q(2, 2), Poly.p(2, 1), Poly.p(2, 2)
    return (
        (q1 * q2 + p1 * p2) * 2,
        (q1 * p2 - q2 * p1) * 2,
        q1 ** 2 + p1 ** 2 - q2 ** 2 - p2 ** 2,
        q1 ** 2 + q2 ** 2 + p1 ** 2 + p2 ** 2,
    )


@lru_cache(maxsize=None)
def w_monomial(exps: tuple) -> Poly:
    """``w1^e1 w2^e2 w3^e3 w4^e4`` expanded in ``(q, p)``."""
    out = Poly.const(2, 1)
    for w, e in zip(hopf_generators(), exps):
        if e:
            out = out * w ** e
    return out


def w_monomials(d: int) -> list[tuple]:
    """All w-exponents of total degree ``d`` in ascending lex order.

    ``w4^d`` comes first and ``w1^d`` last; elimination pivots left to right,
    so free directions land on the w1-heavy monomials.
    """
    return sorted(e for e in product(range(d + 1), repeat=4) if sum(e) == d)


SYZYGY = {(2, 0, 0, 0): 1, (0, 2, 0, 0): 1, (0, 0, 2, 0): 1, (0, 0, 0, 2): -1}


def _affine(c0=0, **coeffs) -> dict:
    out = {"": Fraction(c0)} if c0 else {}
    out.update({k: Fraction(v) for k, v in coeffs.items() if v})
    return out


@dataclass(frozen=True)
class HopfPoly:
    """Polynomial in ``w1..w4`` whose coefficients are affine in free parameters.

    ``terms`` maps a w-exponent tuple to ``{param_name: coeff}`` where the key
    ``""`` holds the constant part.
    """

    terms: dict = field(default_factory=dict)
    params: tuple = ()

    def __post_init__(self):
        clean = {}
        for mono, aff in self.terms.items():
            aff = {k: Fraction(v) for k, v in aff.items() if v}
            if aff:
                clean[tuple(mono)] = aff
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "params", tuple(self.params))

    @classmethod
    def from_coeffs(cls, coeffs: Mapping) -> "HopfPoly":
        """Parameter-free polynomial from ``{w_exponents: rational}``."""
        return cls({m: {"": c} for m, c in coeffs.items()})

    def at(self, values: Mapping[str, object] | None = None) -> "HopfPoly":
        """Fix every parameter; missing ones raise ``KeyError``."""
        values = values or {}
        missing = [p for p in self.params if p not in values]
        if missing:
            raise KeyError(f"missing parameter value(s): {', '.join(missing)}")
        out = {}
        for mono, aff in self.terms.items():
            c = sum((v * (1 if k == "" else Fraction(values[k])) for k, v in aff.items()),
                    Fraction(0))
            if c:
                out[mono] = {"": c}
        return HopfPoly(out)

    def representative(self) -> "HopfPoly":
        """Member of the family with every parameter set to 0."""
        return self.at({p: 0 for p in self.params})

    def constant_coeffs(self) -> dict:
        """``{w_exponents: rational}``; only valid for parameter-free polynomials."""
        if any(set(aff) - {""} for aff in self.terms.values()):
            raise ValueError("polynomial still depends on parameters")
        return {m: aff[""] for m, aff in self.terms.items()}

    def __add__(self, other: "HopfPoly") -> "HopfPoly":
        out = {m: dict(a) for m, a in self.terms.items()}
        for m, aff in other.terms.items():
            tgt = out.setdefault(m, {})
            for k, v in aff.items():
                tgt[k] = tgt.get(k, Fraction(0)) + v
        params = self.params + tuple(p for p in other.params if p not in self.params)
        return HopfPoly(out, params)

    def scale(self, c) -> "HopfPoly":
        c = Fraction(c)
        return HopfPoly({m: {k: v * c for k, v in a.items()} for m, a in self.terms.items()},
                        self.params)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for mono, aff in self.sorted_terms():
            if set(aff) == {""}:
                chunks.append(format_terms([(mono, _gr(aff[""]))], W_NAMES))
                continue
            coeff = format_affine(aff)
            m = format_terms([(mono, _gr(1))], W_NAMES)
            chunks.append(f"({coeff})" + ("" if m == "1" else f"*{m}"))
        text = chunks[0]
        for c in chunks[1:]:
            text += f" - {c[1:]}" if c.startswith("-") else f" + {c}"
        return text

    def __str__(self):
        return self.to_text()


def _gr(c):
    from .poly import GaussRational
    return GaussRational(c)


def format_affine(aff: Mapping[str, Fraction]) -> str:
    keys = sorted(k for k in aff if k) + ([""] if "" in aff else [])
    items = []
    for k in keys:
        items.append(((1,) if k else (0,), _gr(aff[k]), k))
    text = ""
    for i, (mono, c, k) in enumerate(items):
        piece = format_terms([(mono, c)], [k or "_"])
        if i and not piece.startswith("-"):
            piece = "+ " + piece
        elif i:
            piece = "- " + piece[1:]
        text += (" " if i else "") + piece
    return text


def _require_invariant(f: Poly):
    if f.n != 2:
        raise PreconditionError(f"Hopf variables need n = 2, got n = {f.n}")
    if not f.is_real():
        raise PreconditionError("Hopf rewriting needs a real polynomial")
    lu = lie_upsilon(f, FREQ_11)
    if not lu.is_zero():
        raise PreconditionError("polynomial is not invariant under the 1:1 oscillator flow",
                                witness=lu)


def hopf_rewrite(f: Poly, param_start: int = 0, prefix: str = PARAM_PREFIX) -> HopfPoly:
    """Every way of writing the invariant ``f`` as a polynomial in ``w1..w4``.

    Each homogeneous component of degree ``2d`` is matched against all
    w-monomials of degree ``d`` by exact elimination.  Free unknowns become
    parameters ``lam0, lam1, ...`` (numbered from ``param_start``) in the order
    their columns appear, lowest degree first.
    """
    _require_invariant(f)
    terms: dict = {}
    params: list[str] = []
    counter = param_start
    for deg, comp in f.homogeneous_components().items():
        if deg % 2:
            raise PreconditionError(
                f"odd-degree component (degree {deg}) cannot be written in Hopf variables",
                witness=comp)
        cols = w_monomials(deg // 2)
        expansions = [w_monomial(c) for c in cols]
        rows = sorted({m for e in expansions for m in e.terms} | set(comp.terms))
        A = [[e.coefficient(r).re for e in expansions] for r in rows]
        b = [comp.coefficient(r).re for r in rows]
        sol = solve_affine(A, b)
        if sol is None:
            raise PreconditionError(f"degree-{deg} component is not in the span of the w-monomials",
                                    witness=comp)
        names = []
        for _ in sol.free_columns:
            names.append(f"{prefix}{counter}")
            counter += 1
        params.extend(names)
        for j, col in enumerate(cols):
            aff = {"": sol.particular[j]}
            for name, vec in zip(names, sol.null):
                aff[name] = vec[j]
            terms[col] = aff
    return HopfPoly(terms, tuple(params))


def hopf_substitute(h: HopfPoly, params: Mapping[str, object] | None = None) -> Poly:
    """Expand ``h`` back into ``(q, p)`` at the given parameter values."""
    fixed = h.at(params)
    out = Poly.zero(2)
    for mono, c in fixed.constant_coeffs().items():
        out = out + w_monomial(mono) * c
    return out


def syzygy_poly() -> Poly:
    """``w1^2 + w2^2 + w3^2 - w4^2`` expanded; identically zero."""
    return hopf_substitute(HopfPoly.from_coeffs(SYZYGY))


@dataclass
class HopfReport:
    """Per-order Hopf forms of a normal form.

    ``orders[k]`` rewrites the coefficient of ``eps^k`` (``nf[k] / k!``);
    ``by_degree[k][deg]`` holds the piece coming from the homogeneous
    component of degree ``deg`` of that coefficient.
    """

    orders: dict
    by_degree: dict

    @property
    def params(self) -> tuple:
        out = []
        for h in self.orders.values():
            out.extend(h.params)
        return tuple(out)

    def representative(self) -> dict:
        return {k: h.representative() for k, h in self.orders.items()}


def nf_to_hopf(res: NormalFormResult) -> HopfReport:
    orders, by_degree = {}, {}
    counter = 0
    for k in (0, 1, 2):
        coeff = res.nf.term(k)
        if coeff.n != 2:
            raise PreconditionError(f"Hopf variables need n = 2, got n = {coeff.n}")
        total = HopfPoly()
        pieces = {}
        for deg, comp in coeff.homogeneous_components().items():
            h = hopf_rewrite(comp, param_start=counter)
            counter += len(h.params)
            pieces[deg] = h
            total = total + h
        orders[k] = total
        by_degree[k] = pieces
    return HopfReport(orders, by_degree)
