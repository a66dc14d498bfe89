"""Duffin-Kemmer-Petiau step scattering toolkit.

Spin-0 and spin-1 boson step-potential scattering in the first-order (DKP)
formalism: representation matrices and their algebra, exact plane waves, the
charge-type and positive-density currents, closed-form reflection/transmission
coefficients with Dirac and Klein-Gordon contrast solvers, and 1D wave-packet
evolution.
"""

from ._core import (
    Branch,
    Direction,
    DkpError,
    Kinematics,
    PlaneWave,
    UsageError,
    __version__,
    beta_matrices,
    currents,
    derived_matrices,
    dispersion,
    evolve_packet,
    fresnel_normal_incidence,
    photon_planewave,
    poynting,
    residual_first_order,
    solve_step,
    spin0_planewave,
    spin1_massive_planewave,
    sweep,
    trilinear_residual,
)

__all__ = [
    "Branch",
    "Direction",
    "DkpError",
    "Kinematics",
    "PlaneWave",
    "UsageError",
    "__version__",
    "beta_matrices",
    "currents",
    "derived_matrices",
    "dispersion",
    "evolve_packet",
    "fresnel_normal_incidence",
    "photon_planewave",
    "poynting",
    "residual_first_order",
    "solve_step",
    "spin0_planewave",
    "spin1_massive_planewave",
    "sweep",
    "trilinear_residual",
]
