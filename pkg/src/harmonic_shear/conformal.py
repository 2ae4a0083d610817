"""
Conformal map of the unit disk onto a regular n-gon.

    phi(z) = int_0^z (1 - s^n)^(-2/n) ds

The prevertices are the n-th roots of unity and phi(0) = 0, phi'(0) = 1.
Evaluation integrates along the radius, phi(z) = int_0^1 phi'(z t) z dt.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidArgumentError, PoleError
from .quadrature import BatchResult, integrate_family
from .specfun import HypergeometricParams, gauss_2f1

__all__ = [
    "NgonMap",
    "ngon_map",
    "ngon_map_derivative",
    "ngon_map_exact",
    "ngon_map_series",
    "vertex_radius",
    "POLE_TOL",
]

DEFAULT_TOL = 1e-10
POLE_TOL = 64 * np.finfo(float).eps
_DISK_SLACK = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class NgonMap:
    n: int
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 3:
            raise InvalidArgumentError(f"need an integer n >= 3, got {self.n!r}")
        if not self.tol > 0:
            raise InvalidArgumentError(f"tol must be positive, got {self.tol}")

    @property
    def prevertices(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.n) / self.n)

    def derivative(self, z):
        return ngon_map_derivative(self, z)

    def __call__(self, z):
        return ngon_map(self, z)


def _check_closed_disk(z: np.ndarray) -> None:
    if np.any(np.abs(z) > 1.0 + _DISK_SLACK):
        raise DomainError("point outside the closed unit disk")


def derivative_unchecked(n: int, z):
    """(1 - z^n)^(-2/n) on the principal branch, no pole or domain checks."""
    return np.exp((-2.0 / n) * np.log(1.0 - z ** n))


def ngon_map_derivative(m: NgonMap, z):
    """phi'(z) = (1 - z^n)^(-2/n); raises PoleError at a prevertex."""
    arr = np.asarray(z, dtype=complex)
    _check_closed_disk(arr)
    if np.any(np.abs(1.0 - arr ** m.n) <= POLE_TOL):
        raise PoleError("phi' is singular at a prevertex")
    out = derivative_unchecked(m.n, arr)
    return complex(out) if out.ndim == 0 else out


def ngon_map(m: NgonMap, z, full_output: bool = False):
    """
    phi(z) by adaptive quadrature along the segment [0, z].

    Parameters
    ----------
    m : NgonMap
    z : complex or array_like
        Points in the closed unit disk. Prevertices are allowed: the
        singularity (1 - t)^(-2/n) is integrable.
    full_output : bool
        Also return the :class:`BatchResult` with per-point error
        estimates and convergence flags.
    """
    arr = np.asarray(z, dtype=complex)
    _check_closed_disk(arr)
    n = m.n

    def integrand(t, p):
        return p * derivative_unchecked(n, p * t)

    # Points within rounding of a prevertex rho^k are evaluated as rho^k phi(1):
    # phi behaves like (z - rho^k)^(1 - 2/n) there, so an input offset of one
    # ulp would otherwise show up as ~1e-16^(1 - 2/n) in the result.
    flat = arr.ravel()
    k = np.rint(np.angle(flat) * n / (2 * np.pi))
    snap = np.abs(1.0 - flat ** n) <= POLE_TOL
    path = np.where(snap, 1.0 + 0j, flat)
    res = integrate_family(integrand, path, 0.0, 1.0, tol=m.tol)
    rot = np.where(snap, np.exp(2j * np.pi * k / n), 1.0)
    res = BatchResult(res.value * rot, res.error_estimate, res.subdivisions, res.converged)
    value = res.value.reshape(arr.shape)
    if arr.ndim == 0:
        value = complex(value)
    return (value, res) if full_output else value


def vertex_radius(n: int) -> float:
    """|phi(1)| = B(1/n, 1 - 2/n) / n, the distance from 0 to a vertex."""
    return math.exp(math.lgamma(1.0 / n) + math.lgamma(1.0 - 2.0 / n) - math.lgamma(1.0 - 1.0 / n)) / n


def ngon_map_exact(n: int, z, pole: str = "raise"):
    """
    Reference values phi(z) = z F(2/n, 1/n; 1 + 1/n; z^n).

    This is the binomial series of the integrand integrated term by term;
    the hypergeometric evaluation sums it directly for |z^n| <= 1/2 and
    switches to the Euler integral closer to the circle. At a prevertex
    it is Gauss's sum, i.e. the vertex itself.
    """
    arr = np.asarray(z, dtype=complex)
    _check_closed_disk(arr)
    w = arr ** n
    f = gauss_2f1(HypergeometricParams(2.0 / n, 1.0 / n, 1.0 + 1.0 / n), w, closed=True, pole=pole)
    out = arr * f
    return complex(out) if arr.ndim == 0 else out


def ngon_map_series(n: int, z, terms: int = 10_000):
    """Partial sum of sum_k (2/n)_k / k! z^(nk+1) / (nk+1) with ``terms`` terms."""
    arr = np.asarray(z, dtype=complex)
    k = np.arange(terms)
    coef = np.ones(terms)
    coef[1:] = np.cumprod((2.0 / n + k[:-1]) / (k[:-1] + 1.0))
    coef = coef / (n * k + 1.0)
    w = arr[..., None] ** n
    powers = np.cumprod(np.concatenate([np.ones_like(w), np.broadcast_to(w, w.shape[:-1] + (terms - 1,))], axis=-1), axis=-1)
    out = arr * np.sum(coef * powers, axis=-1)
    return complex(out) if arr.ndim == 0 else out
