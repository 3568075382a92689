"""
Numerical check that the truncated normal form shadows the true dynamics.

Integration uses the implicit midpoint rule (symmetric, symplectic, order 2)
solved by fixed-point iteration.  Trajectories follow the Hamiltonian vector
field of this package, ``dx/dt = {H, x}``, i.e. ``dq/dt = -dH/dp`` and
``dp/dt = dH/dq``.  Exact polynomial data are converted to floats once, when
the vector field is compiled.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import IntegrationError
from .hopf import hopf_generators
from .normalform import NormalFormResult, PerturbedHamiltonian
from .poisson import bracket, hamiltonian_vector_field
from .poly import Poly


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step implicit midpoint settings.

    ``tol`` is the max-norm change between fixed-point iterates at which a
    step is accepted; ``max_iter`` iterations without reaching it is an error.
    """

    h: float = 1e-2
    steps: int = 1000
    tol: float = 1e-14
    max_iter: int = 100


def _float_expr(p: Poly) -> str:
    if p.is_zero():
        return "0.0"
    pieces = []
    for mono, c in p.terms.items():
        factors = [repr(float(c.re))]
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(f"x{i}")
            elif e > 1:
                factors.append(f"x{i}**{e}")
        pieces.append("*".join(factors))
    return " + ".join(pieces)


def compile_vector_field(H: Poly):
    """Float function ``x -> X_H(x)`` as a tuple, generated from exact data."""
    if not H.is_real():
        raise ValueError("Hamiltonian must be real")
    dim = 2 * H.n
    args = ", ".join(f"x{i}" for i in range(dim))
    body = ", ".join(_float_expr(c) for c in hamiltonian_vector_field(H))
    src = f"def _vf(x):\n    {args}, = x\n    return ({body},)\n"
    ns: dict = {}
    exec(compile(src, "<vector-field>", "exec"), ns)
    return ns["_vf"]


def compile_function(f: Poly):
    """Float scalar function of a point, for monitoring energies and invariants."""
    dim = 2 * f.n
    args = ", ".join(f"x{i}" for i in range(dim))
    src = f"def _fn(x):\n    {args}, = x\n    return {_float_expr(f)}\n"
    ns: dict = {}
    exec(compile(src, "<function>", "exec"), ns)
    return ns["_fn"]


def midpoint_step(vf, x: tuple, h: float, tol: float = 1e-14, max_iter: int = 100) -> tuple:
    """One implicit midpoint step ``x1 = x + h*F((x + x1)/2)``."""
    try:
        x1 = tuple(a + h * b for a, b in zip(x, vf(x)))
        for _ in range(max_iter):
            mid = tuple(0.5 * (a + b) for a, b in zip(x, x1))
            new = tuple(a + h * b for a, b in zip(x, vf(mid)))
            delta = max(abs(a - b) for a, b in zip(new, x1))
            x1 = new
            scale = max(1.0, max(abs(a) for a in x1))
            if delta <= tol * scale:
                return x1
            if not math.isfinite(delta):
                break
    except OverflowError:
        pass
    raise IntegrationError("implicit midpoint iteration did not converge")


def integrate(H: Poly, x0: Sequence[float], cfg: IntegratorConfig = IntegratorConfig(),
              every: int = 1) -> np.ndarray:
    """Trajectory of ``X_H`` from ``x0``; rows are states at steps ``0, every, 2*every, ...``."""
    if len(x0) != 2 * H.n:
        raise ValueError(f"x0 has length {len(x0)}, expected {2 * H.n}")
    x = tuple(float(v) for v in x0)
    if not all(math.isfinite(v) for v in x):
        raise ValueError("x0 must be finite")
    vf = compile_vector_field(H)
    out = [x]
    for k in range(1, cfg.steps + 1):
        try:
            x = midpoint_step(vf, x, cfg.h, cfg.tol, cfg.max_iter)
        except IntegrationError as exc:
            raise IntegrationError(f"{exc} at step {k}", step=k) from None
        if k % every == 0:
            out.append(x)
    return np.array(out)


# -- normal form comparison -------------------------------------------------------

@dataclass
class ComparisonReport:
    eps: list
    errors: list
    slope: float
    residual: float
    intercept: float
    order: int = 2
    transform: str = "lie"
    horizon: float = 1.0
    x0: list = field(default_factory=list)
    h: float = 1e-2

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{'eps':>10}  {'sup |dw|':>14}"]
        for e, err in zip(self.eps, self.errors):
            lines.append(f"{e:>10.4g}  {err:>14.6e}")
        lines.append(f"slope = {self.slope:.4f} (lsq residual {self.residual:.3e}), "
                     f"order = {self.order}, transform = {self.transform}")
        return "\n".join(lines)


def fit_loglog(eps: Sequence[float], errors: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares ``log(err) = slope*log(eps) + b``; returns slope, b, residual norm."""
    x = np.log(np.asarray(eps, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.linalg.norm(A @ coef - y))
    return float(coef[0]), float(coef[1]), resid


def _lie_push(f: Poly, G0: Poly, G1: Poly, eps: Fraction, order: int) -> Poly:
    """``f o Phi_eps`` to the given order for the flow generated by ``G0 + eps*G1``."""
    out = f
    if order >= 1:
        b0 = bracket(G0, f)
        out = out + b0 * eps
        if order >= 2:
            out = out + (bracket(G0, b0) + bracket(G1, f)) * (eps * eps / 2)
    return out


def _lie_pull(f: Poly, G0: Poly, G1: Poly, eps: Fraction, order: int) -> Poly:
    """``f o Phi_eps^{-1}`` to the given order."""
    out = f
    if order >= 1:
        b0 = bracket(G0, f)
        out = out - b0 * eps
        if order >= 2:
            out = out + (bracket(G0, b0) - bracket(G1, f)) * (eps * eps / 2)
    return out


def compare_nf(ph: PerturbedHamiltonian, res: NormalFormResult, eps_list: Sequence[float],
               x0: Sequence[float], T: float = 1.0, h: float = 1e-2, order: int = 2,
               transform: str = "lie", samples: int = 2000) -> ComparisonReport:
    """Sup-norm distance of the Hopf-type invariants along the true and normalised flows.

    For each ``eps`` both ``H_eps`` and the normal form truncated at ``order``
    are integrated over ``t in [0, T/eps]``.  With ``transform="lie"`` the
    normal-form trajectory starts at ``Phi_eps^{-1}(x0)`` and its invariants
    are read through ``w o Phi_eps`` (both as Lie series to ``order``); with
    ``transform="none"`` both runs start at ``x0`` and ``w`` is compared as is.
    The invariants are ``w1..w4`` for two degrees of freedom and the action
    variables ``(q_j^2 + p_j^2)/2`` otherwise.
    """
    if transform not in ("lie", "none"):
        raise ValueError("transform must be 'lie' or 'none'")
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    n = ph.n
    if n == 2:
        invariants = list(hopf_generators())
    else:
        invariants = [(Poly.q(n, j) ** 2 + Poly.p(n, j) ** 2) / 2 for j in range(1, n + 1)]
    errors = []
    for e in eps_list:
        if not 0 < e <= 0.2:
            raise ValueError(f"eps must lie in (0, 0.2], got {e}")
        eq = Fraction(e).limit_denominator(10 ** 12)
        H_true = ph.hamiltonian(eq)
        H_nf = res.nf.truncate(eq, order)
        steps = int(round(T / e / h))
        every = max(1, steps // samples)
        cfg = IntegratorConfig(h=h, steps=steps)
        if transform == "lie":
            coords = [Poly.var(n, i) for i in range(2 * n)]
            y0 = [compile_function(_lie_pull(c, res.G0, res.G1, eq, order))(tuple(x0))
                  for c in coords]
            nf_obs = [_lie_push(w, res.G0, res.G1, eq, order) for w in invariants]
        else:
            y0 = list(x0)
            nf_obs = invariants
        xs = integrate(H_true, x0, cfg, every)
        ys = integrate(H_nf, y0, cfg, every)
        err = 0.0
        for w, wn in zip(invariants, nf_obs):
            fw, fn = compile_function(w), compile_function(wn)
            a = np.array([fw(tuple(r)) for r in xs])
            b = np.array([fn(tuple(r)) for r in ys])
            err = max(err, float(np.max(np.abs(a - b))))
        errors.append(err)
    if len(eps_list) >= 2 and all(err > 0 for err in errors):
        slope, b, resid = fit_loglog(eps_list, errors)
    else:
        slope, b, resid = float("nan"), float("nan"), float("nan")
    return ComparisonReport(list(map(float, eps_list)), errors, slope, resid, b,
                            order, transform, float(T), list(map(float, x0)), h)


def trajectories_csv(t: np.ndarray, xs: np.ndarray, n: int) -> str:
    """CSV text with a time column and one column per canonical variable."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = [f"q{j}" for j in range(1, n + 1)] + [f"p{j}" for j in range(1, n + 1)]
    writer.writerow(["t"] + names)
    for ti, row in zip(t, xs):
        writer.writerow([repr(float(ti))] + [repr(float(v)) for v in row])
    return buf.getvalue()
