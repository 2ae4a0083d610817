"""
Harmonic shears of conformal maps onto regular polygons.

The package computes f = h + conj(g) for the disk-to-n-gon map phi and an
analytic dilatation omega by adaptive Gauss-Kronrod quadrature, checks the
result against hypergeometric and Appell closed forms, and lifts shears
with omega = q^2 to minimal surfaces.
"""
from .conformal import NgonMap, ngon_map, ngon_map_derivative, ngon_map_exact, vertex_radius
from .errors import (
    DomainError,
    InvalidArgumentError,
    NoOracleError,
    NotLiftableError,
    PoleError,
    ShearError,
    UnsupportedParametersError,
)
from .mesh_validate import (
    DiskMesh,
    ErrorField,
    error_field_f,
    error_field_parts,
    mesh_boundary,
    mesh_custom,
    mesh_interior,
    validate,
)
from .minimal_surface import SurfacePoint, lift_psi, psi_closed_form, surface_closed_form, surface_point
from .quadrature import (
    IntegrationResult,
    QuadratureRule,
    adaptive_integrate,
    gauss_kronrod_15,
    gauss_legendre_rule,
    integrate_family,
    kronrod_15_rule,
)
from .shear import Dilatation, ShearResult, analytic_shear, analytic_shear_z2n, analytic_shear_zn, shear_f, shear_g, shear_h
from .specfun import AppellParams, HypergeometricParams, appell_f1, gauss_2f1, ln_gamma, pochhammer

__version__ = "0.1.0"
