"""Weighted Steklov eigenvalues of planar annular domains by P1 finite elements,
with sawtooth boundary homogenisation and closed-form reference spectra."""

from .density import BoundaryDensity, catenoid_density, weighted_boundary_length
from .geometry import AnnularDomain, RadialCurve, TriMesh, build_annular_domain, mesh_domain
from .homogenise import HomogenisationSpec, homogenise_domain, pairing_defect
from .oracle import annulus_spectrum, cylinder_spectrum, disk_spectrum, solve_t1
from .steklov_fem import Spectrum, assemble, dtn_matrix, solve_pencil, steklov_spectrum

__all__ = [
    "AnnularDomain",
    "BoundaryDensity",
    "HomogenisationSpec",
    "RadialCurve",
    "Spectrum",
    "TriMesh",
    "annulus_spectrum",
    "assemble",
    "build_annular_domain",
    "catenoid_density",
    "cylinder_spectrum",
    "disk_spectrum",
    "dtn_matrix",
    "homogenise_domain",
    "mesh_domain",
    "pairing_defect",
    "solve_pencil",
    "solve_t1",
    "steklov_spectrum",
    "weighted_boundary_length",
]
