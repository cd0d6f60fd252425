"""Spectral stability of small-amplitude periodic capillary-gravity waves.

Submodules:
    dispersion  -- dispersion relation, parameter regions, wave numbers
    indices     -- closed-form stability indices and their identities
    bloch       -- zero-amplitude Bloch curves, crossings, Krein signatures
    profiles    -- second-order Stokes expansion and kernel test vectors
    dno         -- Dirichlet-Neumann matrices from the flattened strip
    linop       -- assembled Bloch operator, eigensolves, spectral probes
    diagrams    -- stability-diagram curve tracing, CSV/SVG emission
    cli         -- command-line front end
"""

from .dispersion import Params, RegionTag, dispersion_value, solve_kappa
from .indices import IndexBundle, index_bundle, rescaled_index

__all__ = [
    "Params",
    "RegionTag",
    "dispersion_value",
    "solve_kappa",
    "IndexBundle",
    "index_bundle",
    "rescaled_index",
]

__version__ = "0.1.0"
