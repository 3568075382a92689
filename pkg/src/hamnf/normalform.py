"""
Second-order normal form of ``H_eps = H0 + eps*H1 + (eps^2/2)*H2``.

The normal form is assembled directly from the averaging operators::

    H0 + eps <H1> + (eps^2/2) (<H2> + <{S(H1/omega), H1}>)

together with the generators ``G0``, ``G1`` of the near-identity
transformation.  :func:`lie_transform_residual` re-derives the same series by
Lie-transform expansion, which is the symbolic self-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .averaging import FrequencyData, average, s_op
from .errors import PreconditionError
from .poisson import bracket
from .poly import Poly


@dataclass(frozen=True)
class PerturbedHamiltonian:
    freq: FrequencyData
    H1: Poly
    H2: Poly | None = None

    def __post_init__(self):
        n = self.freq.n
        H2 = Poly.zero(n) if self.H2 is None else self.H2
        object.__setattr__(self, "H2", H2)
        for name, h in (("H1", self.H1), ("H2", H2)):
            if h.n != n:
                raise PreconditionError(f"{name} has n={h.n}, modes give n={n}")
            if not h.is_real():
                raise PreconditionError(f"{name} must have real coefficients")

    @property
    def n(self) -> int:
        return self.freq.n

    @property
    def H0(self) -> Poly:
        return self.freq.H0

    def series(self) -> "EpsSeries":
        return EpsSeries((self.H0, self.H1, self.H2))

    def hamiltonian(self, eps) -> Poly:
        """``H0 + eps*H1 + eps^2/2*H2`` for an exact ``eps``."""
        return self.series().truncate(Fraction(eps))


@dataclass(frozen=True)
class EpsSeries:
    """Coefficients of ``c0 + eps*c1 + (eps^2/2)*c2``; higher orders are dropped."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != 3:
            raise ValueError("EpsSeries holds exactly the orders 0, 1, 2")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def __getitem__(self, k: int) -> Poly:
        return self.coeffs[k]

    def __sub__(self, other: "EpsSeries") -> "EpsSeries":
        return EpsSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def term(self, k: int) -> Poly:
        """Coefficient of ``eps^k`` (the stored one divided by ``k!``)."""
        return self.coeffs[k] / (2 if k == 2 else 1)

    def truncate(self, eps, order: int = 2) -> Poly:
        out = self.coeffs[0]
        if order >= 1:
            out = out + self.coeffs[1] * eps
        if order >= 2:
            out = out + self.coeffs[2] * (eps * eps / 2)
        return out


@dataclass(frozen=True)
class NormalFormResult:
    nf: EpsSeries
    G0: Poly
    G1: Poly


def second_order_nf(ph: PerturbedHamiltonian) -> NormalFormResult:
    freq = ph.freq
    w = freq.omega0
    H1, H2 = ph.H1, ph.H2
    avg_H1 = average(H1, freq)
    S_H1w = s_op(H1 / w, freq)
    inner = bracket(S_H1w, H1)
    nf2 = average(H2, freq) + average(inner, freq)
    G0 = s_op(H1, freq) / w
    G1 = s_op(H2 + inner + bracket(S_H1w, avg_H1), freq) / w
    return NormalFormResult(EpsSeries((ph.H0, avg_H1, nf2)), G0, G1)


def lie_transform_series(ph: PerturbedHamiltonian, G0: Poly, G1: Poly) -> EpsSeries:
    """Second-order expansion of ``H_eps o Phi_eps`` for the flow generated by ``G0 + eps*G1``.

    Lie derivatives along ``X_G`` are brackets ``{G, .}``.
    """
    H0, H1, H2 = ph.H0, ph.H1, ph.H2
    L0H0 = bracket(G0, H0)
    order1 = L0H0 + H1
    order2 = bracket(G0, L0H0) + bracket(G0, H1) * 2 + bracket(G1, H0) + H2
    return EpsSeries((H0, order1, order2))


def lie_transform_residual(ph: PerturbedHamiltonian, res: NormalFormResult) -> EpsSeries:
    """Lie-transform expansion minus the claimed normal form; zero when consistent."""
    return lie_transform_series(ph, res.G0, res.G1) - res.nf


@dataclass
class NormalFormReport:
    passed: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())


def normal_form_condition(res: NormalFormResult, freq: FrequencyData) -> NormalFormReport:
    """Check ``{H0, nf_k} = 0`` for ``k = 1, 2``."""
    H0 = freq.H0
    report = NormalFormReport()
    for k in (1, 2):
        b = bracket(H0, res.nf[k])
        report.passed[k] = b.is_zero()
        if not b.is_zero():
            report.witnesses[k] = b
    return report
