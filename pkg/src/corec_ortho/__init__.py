"""Co-recursive associated Laguerre and Jacobi polynomial families.

Three independent evaluation routes per family (recurrence, explicit
finite-sum, hypergeometric combination), their spectral measures and
Stieltjes transforms, exact-rational fourth-order differential operators with
residual verification, and Karlin-McGregor solution of the matching
birth-death processes with absorption, cross-checked by simulation.
"""

__version__ = "0.1.0"

from . import bdp, hypergeom, jacobi, laguerre, measure, ode4, recurrence  # noqa: F401
from .errors import CorecOrthoError  # noqa: F401
