"""Two-qubit pseudo-density matrices of vacuum fluctuations and the Casimir energy.

Submodules
----------
complexlinalg  dense 4x4 / 2x2 complex linear algebra
clifford       Dirac gamma matrices and qubit conventions
modes          slab geometry, momenta, Matsubara frequencies
pseudodensity  per-mode pseudo-density matrices, entropies, separability
zetareg        zeta functions, Bernoulli polynomials, regularized sums
casimir        Casimir energy pipelines
entropyenergy  entropy functional and its zero-temperature limit
cli            command-line front end
"""

__version__ = "0.1.0"

from .casimir import casimir_cutoff_oracle, casimir_zeta  # noqa: E402
from .clifford import dirac_basis  # noqa: E402
from .modes import Mode, ModeWindow, SlabGeometry, momentum  # noqa: E402
from .pseudodensity import build_rho  # noqa: E402

__all__ = [
    "Mode", "ModeWindow", "SlabGeometry", "build_rho", "casimir_cutoff_oracle",
    "casimir_zeta", "dirac_basis", "momentum",
]
