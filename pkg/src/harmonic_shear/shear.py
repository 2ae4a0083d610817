"""
Shear construction of harmonic maps f = h + conj(g).

Given the n-gon map phi and an analytic dilatation omega with |omega| < 1
in the disk, the shear solves h' - g' = phi', g' = omega h' with
h(0) = g(0) = 0, so that

    h(z) = int_0^1 phi'(z t) / (1 - omega(z t)) z dt
    g(z) = int_0^1 omega(z t) phi'(z t) / (1 - omega(z t)) z dt
    f(z) = 2 Re h(z) - conj(phi(z))

For omega = z^n and omega = z^(2n) the shear has closed forms in terms
of 2F1 and Appell F1; those are exposed as ``analytic_shear_zn`` and
``analytic_shear_z2n`` and serve as reference values.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .conformal import NgonMap, derivative_unchecked, ngon_map, ngon_map_exact
from .errors import DomainError, InvalidArgumentError, NoOracleError
from .quadrature import BatchResult, integrate_family
from .specfun import AppellParams, HypergeometricParams, appell_f1, gauss_2f1

__all__ = [
    "Dilatation",
    "ShearResult",
    "shear_h",
    "shear_g",
    "shear_f",
    "analytic_shear_zn",
    "analytic_shear_z2n",
    "analytic_shear",
]

DEFAULT_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-12


@dataclass(frozen=True)
class Dilatation:
    """
    Analytic dilatation omega, either z^m or an arbitrary vectorised callable.

    ``sqrt_hint`` is an analytic q with q^2 = omega when one exists; it is
    what allows lifting the shear to a minimal surface.
    """

    kind: str
    power: Optional[int] = None
    evaluator: Optional[Callable] = None
    sqrt_hint: Optional[Callable] = None
    vanishes: bool = False

    @classmethod
    def from_power(cls, m: int) -> "Dilatation":
        if isinstance(m, bool) or int(m) != m or m < 0:
            raise InvalidArgumentError(f"dilatation power must be a nonnegative integer, got {m!r}")
        m = int(m)
        if m == 0:
            return cls.zero()
        half = m // 2
        sqrt = (lambda z: z ** half) if m % 2 == 0 else None
        return cls("power", m, lambda z: z ** m, sqrt)

    @classmethod
    def zero(cls) -> "Dilatation":
        """omega identically 0: the shear is phi itself."""
        return cls("custom", None, np.zeros_like, np.zeros_like, vanishes=True)

    @classmethod
    def custom(cls, evaluator: Callable, sqrt_hint: Optional[Callable] = None) -> "Dilatation":
        return cls("custom", None, evaluator, sqrt_hint)

    @property
    def liftable(self) -> bool:
        return self.sqrt_hint is not None

    def __call__(self, z):
        return self.evaluator(z)

    def describe(self) -> str:
        if self.kind == "power":
            return f"z^{self.power}"
        return "0" if self.vanishes else "custom"


@dataclass(frozen=True)
class ShearResult:
    h: object
    g: object
    f: object
    phi: object
    h_converged: object
    phi_converged: object

    @property
    def converged(self):
        return np.logical_and(self.h_converged, self.phi_converged)

    def reconstruction_error(self):
        """|f - (h + conj g)|; zero up to rounding since g = h - phi."""
        return np.abs(np.asarray(self.f) - (np.asarray(self.h) + np.conj(self.g)))


def _points(z):
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) > 1.0 + 4 * np.finfo(float).eps):
        raise DomainError("point outside the closed unit disk")
    return arr


def _shape_back(values, arr):
    values = values.reshape(arr.shape)
    return complex(values) if arr.ndim == 0 else values


def _integrate(integrand, arr, tol):
    return integrate_family(integrand, arr.ravel(), 0.0, 1.0, tol=tol)


def shear_h(m: NgonMap, w: Dilatation, z, tol: float = DEFAULT_TOL, full_output: bool = False):
    """Analytic part h(z) = int_0^1 phi'(zt) / (1 - omega(zt)) z dt."""
    arr = _points(z)
    n = m.n
    if w.vanishes:
        # h is phi itself; reuse the map so prevertices are handled alike
        return ngon_map(NgonMap(n, tol), arr, full_output=full_output)

    def integrand(t, p):
        s = p * t
        return p * derivative_unchecked(n, s) / (1.0 - w(s))

    res = _integrate(integrand, arr, tol)
    value = _shape_back(res.value, arr)
    return (value, res) if full_output else value


def shear_g(m: NgonMap, w: Dilatation, z, tol: float = DEFAULT_TOL, full_output: bool = False):
    """Co-analytic part g(z) = int_0^1 omega(zt) phi'(zt) / (1 - omega(zt)) z dt."""
    arr = _points(z)
    n = m.n
    if w.vanishes:
        value = _shape_back(np.zeros(arr.size, dtype=complex), arr)
        if not full_output:
            return value
        zero = np.zeros(arr.size)
        return value, BatchResult(zero.astype(complex), zero, np.ones(arr.size, dtype=int), np.ones(arr.size, dtype=bool))

    def integrand(t, p):
        s = p * t
        om = w(s)
        return p * om * derivative_unchecked(n, s) / (1.0 - om)

    res = _integrate(integrand, arr, tol)
    value = _shape_back(res.value, arr)
    return (value, res) if full_output else value


def shear_f(m: NgonMap, w: Dilatation, z, tol: float = DEFAULT_TOL) -> ShearResult:
    """
    Full shear at ``z``: h by quadrature, phi from the n-gon map, then
    g = h - phi and f = 2 Re h - conj(phi).
    """
    arr = _points(z)
    h, hres = shear_h(m, w, arr, tol, full_output=True)
    phi, pres = ngon_map(NgonMap(m.n, tol), arr, full_output=True)
    h = np.asarray(h)
    phi = np.asarray(phi)
    g = h - phi
    f = 2.0 * h.real - np.conj(phi)
    hc = hres.converged.reshape(arr.shape)
    pc = pres.converged.reshape(arr.shape)
    if arr.ndim == 0:
        result = ShearResult(complex(h), complex(g), complex(f), complex(phi), bool(hc), bool(pc))
    else:
        result = ShearResult(h, g, f, phi, hc, pc)
    err = result.reconstruction_error()
    scale = np.maximum(1.0, np.abs(result.f))
    ok = ~np.isfinite(err) | (err <= RECONSTRUCTION_TOL * scale)
    if not np.all(ok):
        raise ArithmeticError("f = 2 Re h - conj(phi) and h + conj(g) disagree")
    return result


def _oracle_points(z, closed):
    arr = np.asarray(z, dtype=complex)
    r = np.abs(arr)
    if np.any(r > 1.0 + 4 * np.finfo(float).eps) or (not closed and np.any(r >= 1.0)):
        raise DomainError("closed-form shear needs |z| < 1")
    return arr


def analytic_shear_zn(n: int, z, closed: bool = False, pole: str = "raise"):
    """
    Closed form for omega = z^n:

        h = z F(1 + 2/n, 1/n; 1 + 1/n; z^n)
        g = z^(n+1) / (n+1) F(1 + 2/n, 1 + 1/n; 2 + 1/n; z^n)

    ``closed`` admits points on the unit circle (Euler-integral route);
    ``pole`` is passed through to the hypergeometric evaluation.
    """
    arr = _oracle_points(z, closed)
    w = arr ** n
    fh = gauss_2f1(HypergeometricParams(1 + 2 / n, 1 / n, 1 + 1 / n), w, closed=closed, pole=pole)
    fg = gauss_2f1(HypergeometricParams(1 + 2 / n, 1 + 1 / n, 2 + 1 / n), w, closed=closed, pole=pole)
    h = arr * fh
    g = arr ** (n + 1) / (n + 1) * fg
    if arr.ndim == 0:
        return complex(h), complex(g)
    return h, g


def analytic_shear_z2n(n: int, z, closed: bool = False, pole: str = "raise"):
    """
    Closed form for omega = z^(2n):

        h = z F1(1/n; 1 + 2/n, 1; 1 + 1/n; z^n, -z^n)
        g = z^(2n+1) / (2n+1) F1(2 + 1/n; 1 + 2/n, 1; 3 + 1/n; z^n, -z^n)
    """
    arr = _oracle_points(z, closed)
    w = arr ** n
    fh = appell_f1(AppellParams(1 / n, 1 + 2 / n, 1.0, 1 + 1 / n), w, -w, closed=closed, pole=pole)
    fg = appell_f1(AppellParams(2 + 1 / n, 1 + 2 / n, 1.0, 3 + 1 / n), w, -w, closed=closed, pole=pole)
    h = arr * fh
    g = arr ** (2 * n + 1) / (2 * n + 1) * fg
    if arr.ndim == 0:
        return complex(h), complex(g)
    return h, g


def analytic_shear(n: int, w: Dilatation, z, closed: bool = False, pole: str = "raise"):
    """Dispatch to the closed form matching ``w``; omega = 0 gives (phi, 0)."""
    if w.vanishes:
        arr = _oracle_points(z, closed)
        h = ngon_map_exact(n, arr, pole=pole)
        return h, (0j if arr.ndim == 0 else np.zeros_like(arr))
    if w.kind == "power" and w.power == n:
        return analytic_shear_zn(n, z, closed, pole)
    if w.kind == "power" and w.power == 2 * n:
        return analytic_shear_z2n(n, z, closed, pole)
    raise NoOracleError(f"no closed form for omega = {w.describe()} with n = {n}")
