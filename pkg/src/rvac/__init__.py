"""Linear stability of relativistic plasma-vacuum interfaces.

Submodules:

- ``state``: equation of state, derived plasma quantities, base states
- ``symbols``: symmetric-hyperbolic symbol matrices
- ``densenum``: small dense linear algebra and scalar root finding
- ``boundary``: boundary spectra, the W transform, normal-derivative recovery
- ``stability``: the sufficient energy-estimate stability test and parameter sweeps
- ``modes``: normal-mode analysis of the closed-form families
- ``cli``: command-line front end
"""

from .errors import RvacError
from .state import (
    Eos,
    InterfaceBaseState,
    PlasmaState,
    VacuumState,
    check_hyperbolic,
    derive_plasma,
    front_symbol_gap,
    make_base_state,
    mu_hat,
)

__version__ = "0.1.0"

__all__ = [
    "Eos",
    "InterfaceBaseState",
    "PlasmaState",
    "RvacError",
    "VacuumState",
    "__version__",
    "check_hyperbolic",
    "derive_plasma",
    "front_symbol_gap",
    "make_base_state",
    "mu_hat",
]
