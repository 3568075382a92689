"""
Averaging operators for the circle action of a resonant harmonic oscillator.

The unperturbed Hamiltonian is ``H0 = omega0 * sum_j m_j (q_j^2 + p_j^2) / 2``.
In the phase basis ``z_j = q_j + i p_j`` the flow of the action generator
``Upsilon = X_H0 / omega0`` multiplies ``z^a zbar^b`` by ``exp(i*sigma*k*t)``
with phase weight ``k = sum_j m_j (a_j - b_j)``, so both averages reduce to
exact per-term factors:

* ``<f>`` keeps the ``k = 0`` terms;
* ``S(f)`` multiplies each ``k != 0`` term by
  ``(1/2pi) int_0^{2pi} (t - pi) exp(i sigma k t) dt = 1 / (i sigma k)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .poisson import bracket
from .poly import ComplexBasisPoly, GaussRational, Poly, from_complex_basis, to_complex_basis

# Direction of the circle action: z_j(t) = exp(i * ACTION_SIGN * m_j * t) z_j.
# Fixed by the bracket convention {f,g} = f_q g_p - f_p g_q with X_f(g) = {f,g};
# guarded by the quadrature-oracle tests.
ACTION_SIGN = 1


@dataclass(frozen=True)
class FrequencyData:
    """Mode vector ``m`` and overall frequency ``omega0`` of the oscillator."""

    modes: tuple
    omega0: Fraction = Fraction(1)

    def __post_init__(self):
        modes = tuple(int(m) for m in self.modes)
        if not modes:
            raise ValueError("at least one mode is required")
        if any(m <= 0 for m in modes):
            raise ValueError(f"modes must be positive integers, got {modes}")
        if reduce(gcd, modes) != 1:
            raise ValueError(f"modes must have gcd 1, got {modes}")
        omega0 = Fraction(self.omega0)
        if omega0 <= 0:
            raise ValueError("omega0 must be positive")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "omega0", omega0)

    @property
    def n(self) -> int:
        return len(self.modes)

    @property
    def H0(self) -> Poly:
        n = self.n
        h = Poly.zero(n)
        for j, m in enumerate(self.modes, start=1):
            h = h + (Poly.q(n, j) ** 2 + Poly.p(n, j) ** 2) * Fraction(m, 2)
        return h * self.omega0

    def phase_weight(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Net phase ``sum m_j (a_j - b_j)`` of ``z^a zbar^b``."""
        return sum(m * (x - y) for m, x, y in zip(self.modes, a, b))

    def check(self, f: Poly):
        if f.n != self.n:
            raise DimensionError(f"polynomial has n={f.n}, frequency data has n={self.n}")


def average(f: Poly, freq: FrequencyData) -> Poly:
    """Average of ``f`` over one period of the circle action."""
    freq.check(f)
    F = to_complex_basis(f)
    kept = {ab: c for ab, c in F.terms.items() if freq.phase_weight(*ab) == 0}
    return from_complex_basis(ComplexBasisPoly(f.n, kept))


def _s_factor(k: int) -> GaussRational:
    # 1 / (i * sigma * k)
    return GaussRational(0, Fraction(-ACTION_SIGN, k))


def s_op(f: Poly, freq: FrequencyData) -> Poly:
    """The ``S`` operator: time average of ``f`` weighted by ``(t - pi)``."""
    freq.check(f)
    F = to_complex_basis(f)
    out = {}
    for ab, c in F.terms.items():
        k = freq.phase_weight(*ab)
        if k:
            out[ab] = c * _s_factor(k)
    return from_complex_basis(ComplexBasisPoly(f.n, out))


def lie_upsilon(f: Poly, freq: FrequencyData) -> Poly:
    """Lie derivative of ``f`` along the action generator, ``{H0, f} / omega0``."""
    freq.check(f)
    return bracket(freq.H0, f) / freq.omega0


def is_invariant(f: Poly, freq: FrequencyData) -> bool:
    return lie_upsilon(f, freq).is_zero()


# -- numerical oracle -----------------------------------------------------------

class Kernel(enum.Enum):
    AVG = "avg"
    S = "s"


def compile_numeric(f: Poly):
    """Vectorised float evaluator ``X (N, 2n) -> (N,)`` for a real polynomial."""
    if not f.is_real():
        raise ValueError("numeric evaluation requires a real polynomial")
    if f.is_zero():
        return lambda X: np.zeros(np.asarray(X).shape[0])
    exps = np.array(list(f.terms.keys()), dtype=int)
    coefs = np.array([float(c.re) for c in f.terms.values()])

    def fn(X):
        X = np.asarray(X, dtype=float)
        mons = np.prod(X[:, None, :] ** exps[None, :, :], axis=2)
        return mons @ coefs
    return fn


def rotate(point, freq: FrequencyData, t, sign: int = ACTION_SIGN) -> np.ndarray:
    """Exact flow of the action generator: per-mode rotation by ``sign*m_j*t``.

    ``t`` may be an array; the result has shape ``(len(t), 2n)``.
    """
    x = np.asarray(point, dtype=float)
    n = freq.n
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((t.size, 2 * n))
    for j, m in enumerate(freq.modes):
        th = sign * m * t
        c, s = np.cos(th), np.sin(th)
        q, p = x[j], x[n + j]
        # z -> exp(i th) z
        out[:, j] = q * c - p * s
        out[:, n + j] = p * c + q * s
    return out


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def quadrature_oracle(f: Poly, freq: FrequencyData, point, which=Kernel.AVG,
                      sign: int = ACTION_SIGN, panels: int = 32) -> float:
    """Numerical ``<f>`` or ``S(f)`` at ``point`` by composite Gauss-Legendre quadrature.

    Independent of the phase-basis route: the flow is applied as explicit
    rotations and integrated over ``[0, 2pi]``.  For integrands up to degree
    8 and modes up to 3 the absolute error is far below 1e-10.
    """
    which = Kernel(which) if not isinstance(which, Kernel) else which
    freq.check(f)
    edges = np.linspace(0.0, 2 * np.pi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    vals = compile_numeric(f)(rotate(point, freq, t, sign))
    if which is Kernel.S:
        vals = vals * (t - np.pi)
    return float(np.dot(w, vals) / (2 * np.pi))
