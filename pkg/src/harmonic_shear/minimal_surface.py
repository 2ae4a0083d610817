"""
Minimal surface lift of a shear whose dilatation is a square, omega = q^2.

The surface is (Re f, Im f, 2 Im psi) with

    psi(z) = int_0^z q(s) phi'(s) / (1 - omega(s)) ds.

Note the derivative phi' in the integrand. Writing phi instead (as is
sometimes printed) breaks the Weierstrass-Enneper relation psi'^2 = h' g'
and the surface would not be minimal.

Closed form for omega = z^n, q = z^(n/2), n even. The integrand is
z^(n/2) (1 - z^n)^(-1 - 2/n) = sum_k (1 + 2/n)_k / k! z^(nk + n/2); term by
term integration gives z^(nk + n/2 + 1) / (nk + n/2 + 1), and with
b = 1/2 + 1/n one has (n/2 + 1) / (nk + n/2 + 1) = (b)_k / (b + 1)_k, so

    psi(z) = 2 z^((n+2)/2) / (n+2) F(1 + 2/n, 1/2 + 1/n; 3/2 + 1/n; z^n).

The leading power is z^((n+2)/2); a leading z^(1 + 1/n) would not match
the lowest-order term of the integrand.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conformal import NgonMap, derivative_unchecked
from .errors import InvalidArgumentError, NotLiftableError
from .quadrature import integrate_family
from .shear import DEFAULT_TOL, Dilatation, analytic_shear_zn, shear_f
from .specfun import HypergeometricParams, gauss_2f1

__all__ = ["SurfacePoint", "lift_psi", "psi_closed_form", "surface_point", "surface_closed_form"]


@dataclass(frozen=True)
class SurfacePoint:
    u: object
    v: object
    w: object

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.u, self.v, self.w), axis=-1)


def lift_psi(m: NgonMap, w: Dilatation, z, tol: float = DEFAULT_TOL, full_output: bool = False):
    """psi(z) = int_0^1 q(zt) phi'(zt) / (1 - omega(zt)) z dt."""
    if not w.liftable:
        raise NotLiftableError(f"omega = {w.describe()} has no analytic square root")
    arr = np.asarray(z, dtype=complex)
    n = m.n
    q = w.sqrt_hint

    def integrand(t, p):
        s = p * t
        return p * q(s) * derivative_unchecked(n, s) / (1.0 - w(s))

    res = integrate_family(integrand, arr.ravel(), 0.0, 1.0, tol=tol)
    value = res.value.reshape(arr.shape)
    value = complex(value) if arr.ndim == 0 else value
    return (value, res) if full_output else value


def psi_closed_form(n: int, z):
    """Closed-form psi for omega = z^n with even n (see module docstring)."""
    if n % 2:
        raise NotLiftableError(f"z^{n} has no single-valued square root for odd n")
    arr = np.asarray(z, dtype=complex)
    fz = gauss_2f1(HypergeometricParams(1 + 2 / n, 0.5 + 1 / n, 1.5 + 1 / n), arr ** n)
    out = 2.0 * arr ** ((n + 2) // 2) / (n + 2) * fz
    return complex(out) if arr.ndim == 0 else out


def surface_point(m: NgonMap, w: Dilatation, z, tol: float = DEFAULT_TOL, full_output: bool = False):
    """
    (Re f, Im f, 2 Im psi) from the numerical shear and lift.

    With ``full_output`` also returns a boolean array, True where h, phi
    and psi all converged.
    """
    if not w.liftable:
        raise NotLiftableError(f"omega = {w.describe()} has no analytic square root")
    sh = shear_f(m, w, z, tol)
    psi, pres = lift_psi(m, w, z, tol, full_output=True)
    point = SurfacePoint(np.real(sh.f), np.imag(sh.f), 2.0 * np.imag(psi))
    if not full_output:
        return point
    ok = np.logical_and(sh.converged, pres.converged.reshape(np.shape(sh.converged)))
    return point, ok


def surface_closed_form(n: int, z) -> SurfacePoint:
    """Reference surface for omega = z^n, n even, from the 2F1 closed forms."""
    if n % 2:
        raise NotLiftableError(f"z^{n} has no single-valued square root for odd n")
    if n < 3:
        raise InvalidArgumentError("need n >= 3")
    h, g = analytic_shear_zn(n, z)
    f = h + np.conj(g)
    psi = psi_closed_form(n, z)
    return SurfacePoint(np.real(f), np.imag(f), 2.0 * np.imag(psi))
