"""JSON form of polynomials, Hopf families and normal-form results."""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .hopf import HopfPoly, HopfReport, format_affine
from .normalform import EpsSeries, NormalFormResult
from .parse import parse_poly
from .poly import GaussRational, Poly, format_monomial, format_poly, var_name


def _coeff_json(c: GaussRational):
    if not c.im:
        return str(c.re)
    return {"re": str(c.re), "im": str(c.im)}


def _coeff_from_json(obj) -> GaussRational:
    if isinstance(obj, dict):
        return GaussRational(Fraction(obj["re"]), Fraction(obj["im"]))
    return GaussRational(Fraction(str(obj)))


def poly_to_json(f: Poly) -> dict:
    names = [var_name(f.n, i) for i in range(2 * f.n)]
    return {
        "text": format_poly(f),
        "terms": [{"monomial": format_monomial(m, names) or "1", "exponents": list(m),
                   "coeff": _coeff_json(c)} for m, c in f.sorted_terms()],
    }


def poly_from_json(obj: dict, n: int) -> Poly:
    """Rebuild a polynomial from its exponent map; falls back to the text form."""
    if "terms" in obj:
        try:
            return Poly(n, {tuple(t["exponents"]): _coeff_from_json(t["coeff"])
                            for t in obj["terms"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed polynomial terms: {exc}") from None
    return parse_poly(obj["text"], n)


def series_to_json(s: EpsSeries) -> dict:
    return {f"order{k}": poly_to_json(s[k]) for k in range(3)}


def result_to_json(res: NormalFormResult) -> dict:
    """Normal form and generators.

    ``normal_form.order{k}`` holds the stored coefficient ``c_k`` of
    ``c0 + eps*c1 + (eps^2/2)*c2``; ``eps_coefficients`` holds ``c_k / k!``.
    """
    return {
        "normal_form": series_to_json(res.nf),
        "eps_coefficients": {f"eps^{k}": poly_to_json(res.nf.term(k)) for k in range(3)},
        "generators": {"G0": poly_to_json(res.G0), "G1": poly_to_json(res.G1)},
    }


def result_from_json(doc: dict, n: int) -> NormalFormResult:
    try:
        nf = doc["normal_form"]
        gens = doc["generators"]
        coeffs = tuple(poly_from_json(nf[f"order{k}"], n) for k in range(3))
        return NormalFormResult(EpsSeries(coeffs), poly_from_json(gens["G0"], n),
                                poly_from_json(gens["G1"], n))
    except KeyError as exc:
        raise ParseError(f"result document lacks {exc.args[0]!r}") from None


def hopf_to_json(h: HopfPoly, values: dict | None = None) -> dict:
    selected = h.at({p: (values or {}).get(p, 0) for p in h.params})
    return {
        "family": h.to_text(),
        "params": list(h.params),
        "terms": [{"w": list(m), "coeff": {k or "1": str(v) for k, v in sorted(a.items())},
                   "coeff_text": format_affine(a)} for m, a in h.sorted_terms()],
        "selected": selected.to_text(),
        "selected_terms": [{"w": list(m), "coeff": str(c)}
                           for m, c in sorted(selected.constant_coeffs().items(),
                                              key=lambda mc: (sum(mc[0]), mc[0]), reverse=True)],
    }


def hopf_report_to_json(rep: HopfReport, values: dict | None = None) -> dict:
    out = {}
    for k, h in rep.orders.items():
        entry = hopf_to_json(h, values)
        entry["by_degree"] = {str(d): hopf_to_json(p, values)
                              for d, p in rep.by_degree[k].items()}
        out[f"eps^{k}"] = entry
    return out
