"""Curve families, their augmentations and the two moment maps of the dual pair.

Submodules:

- ``geometry``: discrete curves, families, region areas
- ``densities``: 1-form densities, augmentations, reparametrisations
- ``phase``: the cotangent phase space, its forms and generator lifts
- ``moments``: left, right, reduced and dipole moment maps
- ``leaves``: leaf invariants, codimension probes, Moser flow
- ``dipoles``: vortex dipole loops and their evolution
- ``prequant``: integer certificates and generator pairings
- ``dualpair``: finite-dimensional dual-pair probes
- ``scene_io`` / ``cli``: scene files, reports, command line
"""

from .geometry import (Ambient, CurveFamily, DiscreteCurve, GeometryError, PLANE, circle, ellipse,
                       enclosed_area, meridian, quadrature_area, region_areas, torus)
from .densities import (Augmentation, DensityError, OneFormDensity, Reparametrization, epsilon_section,
                        length_spectrum, orbit_type_equal)
from .fields import HamiltonianSpec, VectorField, gaussian, hamiltonian_field
from .phase import (CotangentPoint, PhaseTangent, QuotientClass, lift_ambient, lift_reparam, omega_eval,
                    quotient_project, reparametrize, theta_eval)
from .moments import moment_dipole, moment_left, moment_reduced_level, moment_right
from .leaves import codim_rank, isodrast_flux, leaf_invariants, moser_cylinder_flow, same_leaf
from .dipoles import DipoleLoop, evolve, gamma_from_u, invariant_report, side_classify, u_from_gamma
from .prequant import certificate, verify_generator_pairing
from .dualpair import build_battery, complement_residual, hamiltonian_property_check
from .scene_io import Scene, dump_scene, emit_report, parse_scene

__version__ = "0.1.0"
