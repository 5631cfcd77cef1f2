"""conespec: spectral invariants of Fuchs-type operators on the model cone.

Modules:
    expansions -- log-power asymptotic expansions and the function algebra
    mellin     -- Mellin transforms, regularized integrals and limits
    sal        -- singular-asymptotics expansion engines
    specfun    -- Bessel/Laguerre/Hankel, Bernoulli, Gamma-ratio, zeta tools
    cone       -- heat kernels, zeta/eta functions, residues, heat traces
    deficiency -- deficiency-index arithmetic and Clifford-module indices
    cli        -- command-line interface and verification suite
"""

__version__ = "0.1.0"

from . import cone, deficiency, expansions, mellin, sal, specfun  # noqa: F401

__all__ = [
    "cone",
    "deficiency",
    "expansions",
    "mellin",
    "sal",
    "specfun",
    "__version__",
]
