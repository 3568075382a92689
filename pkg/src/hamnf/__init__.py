"""Global second-order normal forms of perturbed resonant harmonic oscillators."""

from .averaging import ACTION_SIGN, FrequencyData, Kernel, average, lie_upsilon, quadrature_oracle, s_op
from .errors import DimensionError, IntegrationError, ParseError, PreconditionError
from .hopf import HopfPoly, hopf_rewrite, hopf_substitute, nf_to_hopf
from .normalform import (EpsSeries, NormalFormResult, PerturbedHamiltonian, lie_transform_residual,
                         normal_form_condition, second_order_nf)
from .parse import ProblemSpec, parse_poly, parse_spec
from .poisson import bracket, ham_apply
from .poly import GaussRational, Poly, from_complex_basis, to_complex_basis

__version__ = "0.1.0"
