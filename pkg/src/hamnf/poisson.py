"""Canonical Poisson bracket on R^{2n}.

Convention: ``{f, g} = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i)`` and the
Hamiltonian vector field acts by ``X_f(g) = {f, g}``.  Consequently the flow
of ``X_H`` obeys ``dq/dt = -dH/dp``, ``dp/dt = dH/dq``.
"""

from __future__ import annotations

from .poly import Poly


def bracket(f: Poly, g: Poly) -> Poly:
    """Canonical Poisson bracket ``{f, g}``.

    >>> from hamnf.poly import Poly
    >>> bracket(Poly.q(1, 1), Poly.p(1, 1)) == 1
    True
    """
    f._check(g)
    n = f.n
    out = Poly.zero(n)
    for i in range(n):
        fq, gp = f.partial(i), g.partial(n + i)
        if not fq.is_zero() and not gp.is_zero():
            out = out + fq * gp
        fp, gq = f.partial(n + i), g.partial(i)
        if not fp.is_zero() and not gq.is_zero():
            out = out - fp * gq
    return out


def ham_apply(h: Poly, g: Poly) -> Poly:
    """Lie derivative of ``g`` along the Hamiltonian vector field of ``h``."""
    return bracket(h, g)


def hamiltonian_vector_field(h: Poly) -> list[Poly]:
    """Components ``X_h(x_i) = {h, x_i}`` in the order ``(q1..qn, p1..pn)``."""
    n = h.n
    return [-h.partial(n + i) for i in range(n)] + [h.partial(i) for i in range(n)]
