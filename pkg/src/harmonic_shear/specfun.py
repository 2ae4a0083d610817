"""
Real-parameter hypergeometric functions of a complex argument.

Two evaluation routes are provided for both the Gauss function 2F1 and the
first Appell function F1: the defining power series (used for small
arguments) and the Euler integral representation (used near the unit
circle). The two routes are independent, which is what makes these
functions usable as reference values for the quadrature-based shears.

Branch lemma for the Euler integrands: for |z| <= 1 and 0 <= t < 1,
Re(1 - z t) >= 1 - |z| t > 0, so 1 - z t stays in the open right half
plane and the principal power (1 - z t)^(-a) = exp(-a Log(1 - z t)) is
continuous along the whole path of integration.

Functions accept scalars or numpy arrays for the complex argument(s) and
return a complex scalar or array of matching shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError, UnsupportedParametersError
from .quadrature import integrate_family

__all__ = [
    "HypergeometricParams",
    "AppellParams",
    "pochhammer",
    "ln_gamma",
    "gauss_2f1",
    "appell_f1",
    "SERIES_RADIUS",
]

SERIES_RADIUS = 0.5
SERIES_TERM_TOL = 1e-15
SERIES_MAX_TERMS = 10_000
EULER_TOL = 1e-13
# |1 - z| below this counts as hitting z = 1
_UNIT_TOL = 64 * np.finfo(float).eps
_ABS_FLOOR = 1e-300


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class HypergeometricParams:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if _is_nonpositive_integer(self.c):
            raise UnsupportedParametersError(f"c must not be zero or a negative integer, got {self.c}")


@dataclass(frozen=True)
class AppellParams:
    a: float
    b1: float
    b2: float
    c: float

    def __post_init__(self):
        if _is_nonpositive_integer(self.c):
            raise UnsupportedParametersError(f"c must not be zero or a negative integer, got {self.c}")


def pochhammer(alpha: float, n: int) -> float:
    """Rising factorial alpha (alpha + 1) ... (alpha + n - 1); 1 for n = 0."""
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer, got {n}")
    out = 1.0
    for k in range(int(n)):
        out *= alpha + k
    return out


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def _gamma_ratio(num, den) -> float:
    """prod Gamma(num) / prod Gamma(den) for arguments that may be negative."""
    out = 1.0
    for v in num:
        out *= math.gamma(v)
    for v in den:
        out /= math.gamma(v)
    return out


def _as_complex_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _check_disk(z: np.ndarray, closed: bool) -> None:
    r = np.abs(z)
    bad = r > 1.0 + 4 * np.finfo(float).eps if closed else r >= 1.0
    if np.any(bad):
        raise DomainError(f"argument outside the {'closed' if closed else 'open'} unit disk: |z| = {r[bad].max()}")


def _series_2f1(a, b, c, z: np.ndarray) -> np.ndarray:
    total = np.ones_like(z)
    term = np.ones_like(z)
    active = np.flatnonzero(z != 0)
    for k in range(SERIES_MAX_TERMS):
        if active.size == 0:
            break
        term[active] *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z[active]
        total[active] += term[active]
        keep = np.abs(term[active]) >= SERIES_TERM_TOL * np.abs(total[active])
        active = active[keep]
    return total


def _beta_weighted_integral(alpha, beta, g, params, tol):
    """
    Integral over [0, 1] of t^(alpha-1) (1-t)^(beta-1) g(t, p), one per p.

    Weak end point singularities (alpha < 1 or beta < 1) are removed by
    the substitutions t = u^(1/alpha) on [0, 1/2] and 1 - t = v^(1/beta)
    on [1/2, 1].
    """
    if alpha < 1:
        ia = 1.0 / alpha

        def left(u, p):
            t = u ** ia
            return ia * (1.0 - t) ** (beta - 1.0) * g(t, p)

        left_end = 0.5 ** alpha
    else:

        def left(t, p):
            return t ** (alpha - 1.0) * (1.0 - t) ** (beta - 1.0) * g(t, p)

        left_end = 0.5
    if beta < 1:
        ib = 1.0 / beta

        def right(v, p):
            s = v ** ib
            t = 1.0 - s
            return ib * t ** (alpha - 1.0) * g(t, p)

        right_end = 0.5 ** beta
    else:

        def right(t, p):
            return t ** (alpha - 1.0) * (1.0 - t) ** (beta - 1.0) * g(t, p)

        right_end = None

    lres = integrate_family(left, params, 0.0, left_end, tol=_ABS_FLOOR, rel_tol=tol)
    if right_end is None:
        rres = integrate_family(right, params, 0.5, 1.0, tol=_ABS_FLOOR, rel_tol=tol)
    else:
        rres = integrate_family(right, params, 0.0, right_end, tol=_ABS_FLOOR, rel_tol=tol)
    return lres.value + rres.value


def _euler_2f1(a, b, c, z: np.ndarray, tol) -> np.ndarray:
    if not (c > b > 0):
        raise UnsupportedParametersError(f"Euler integral for 2F1 needs c > b > 0, got b={b}, c={c}")
    if z.size == 0:
        return z.copy()
    pref = math.exp(ln_gamma(c) - ln_gamma(b) - ln_gamma(c - b))

    def g(t, p):
        return np.exp(-a * np.log(1.0 - p * t))

    return pref * _beta_weighted_integral(b, c - b, g, z, tol)


def _near_one(z: np.ndarray) -> np.ndarray:
    return np.abs(1.0 - z) <= _UNIT_TOL


def gauss_2f1(p: HypergeometricParams, z, method: str = "auto", tol: float = EULER_TOL,
              closed: bool = False, pole: str = "raise"):
    """
    Gauss hypergeometric function F(a, b; c; z).

    Parameters
    ----------
    p : HypergeometricParams
    z : complex or array_like
        Argument(s) with |z| < 1 (|z| <= 1 when ``closed`` is set).
    method : {"auto", "series", "euler"}
        ``auto`` sums the series for |z| <= 0.5 and uses the Euler integral
        beyond that.
    tol : float
        Relative tolerance of the Euler quadrature.
    closed : bool
        Accept points on the unit circle. Those go through the Euler
        integral; z = 1 itself is Gauss's sum when c - a - b > 0 and a pole
        otherwise.
    pole : {"raise", "nan"}
        What to do with arguments sitting on a pole.
    """
    z, scalar = _as_complex_array(z)
    _check_disk(z, closed)
    a, b, c = p.a, p.b, p.c
    flat = z.ravel()
    out = np.empty_like(flat)

    at_one = _near_one(flat)
    if np.any(at_one):
        if c - a - b > 0:
            out[at_one] = _gamma_ratio([c, c - a - b], [c - a, c - b])
        elif pole == "raise":
            raise PoleError(f"F({a}, {b}; {c}; 1) diverges (c - a - b = {c - a - b} <= 0)")
        else:
            out[at_one] = np.nan

    rest = ~at_one
    if method == "series":
        use_series = rest
    elif method == "euler":
        use_series = np.zeros_like(rest)
    elif method == "auto":
        use_series = rest & (np.abs(flat) <= SERIES_RADIUS)
    else:
        raise ValueError(f"unknown method {method!r}")
    if method == "series" and np.any(np.abs(flat[rest]) >= 1.0):
        raise DomainError("series branch needs |z| < 1")
    use_euler = rest & ~use_series

    out[use_series] = _series_2f1(a, b, c, flat[use_series])
    if np.any(use_euler):
        out[use_euler] = _euler_2f1(a, b, c, flat[use_euler], tol)
    out = out.reshape(z.shape)
    return complex(out) if scalar else out


def _series_f1(a, b1, b2, c, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Double series summed by anti-diagonals k + l = d.

    Each diagonal is (a)_d / (c)_d * sum_k A_k B_(d-k) with
    A_k = (b1)_k x^k / k! and B_l = (b2)_l y^l / l!.
    """
    n = x.size
    total = np.ones(n, dtype=complex)
    A = [np.ones(n, dtype=complex)]
    B = [np.ones(n, dtype=complex)]
    ratio = 1.0
    active = np.flatnonzero((x != 0) | (y != 0))
    for d in range(1, SERIES_MAX_TERMS):
        if active.size == 0:
            break
        A.append(A[-1] * ((b1 + d - 1) / d) * x)
        B.append(B[-1] * ((b2 + d - 1) / d) * y)
        ratio *= (a + d - 1) / (c + d - 1)
        Ad = np.array([A[k][active] for k in range(d + 1)])
        Bd = np.array([B[d - k][active] for k in range(d + 1)])
        diag = ratio * np.sum(Ad * Bd, axis=0)
        absdiag = abs(ratio) * np.sum(np.abs(Ad) * np.abs(Bd), axis=0)
        total[active] += diag
        keep = absdiag >= SERIES_TERM_TOL * np.abs(total[active])
        active = active[keep]
    return total


def _euler_f1(a, b1, b2, c, x: np.ndarray, y: np.ndarray, tol) -> np.ndarray:
    if not (c > a > 0):
        raise UnsupportedParametersError(f"Euler integral for F1 needs c > a > 0, got a={a}, c={c}")
    if x.size == 0:
        return x.copy()
    pref = math.exp(ln_gamma(c) - ln_gamma(a) - ln_gamma(c - a))
    # pack both arguments into one complex parameter array via an index
    xs, ys = x.copy(), y.copy()

    def g(t, idx):
        k = idx.real.astype(int)
        return np.exp(-b1 * np.log(1.0 - xs[k] * t) - b2 * np.log(1.0 - ys[k] * t))

    return pref * _beta_weighted_integral(a, c - a, g, np.arange(x.size, dtype=float), tol)


def appell_f1(p: AppellParams, x, y, method: str = "auto", tol: float = EULER_TOL,
              closed: bool = False, pole: str = "raise"):
    """
    First Appell function F1(a; b1, b2; c; x, y).

    ``auto`` sums the double series when max(|x|, |y|) <= 0.5 and uses the
    Euler integral otherwise (needs c > a > 0). The remaining keywords
    behave as in :func:`gauss_2f1`; on the unit circle, x = 1 (or y = 1)
    reduces to a Gauss sum times a 2F1 when that converges.
    """
    x, xs = _as_complex_array(x)
    y, ys = _as_complex_array(y)
    x, y = np.broadcast_arrays(x, y)
    shape = x.shape
    _check_disk(x, closed)
    _check_disk(y, closed)
    a, b1, b2, c = p.a, p.b1, p.b2, p.c
    fx, fy = x.ravel().copy(), y.ravel().copy()
    out = np.empty_like(fx)

    x_one, y_one = _near_one(fx), _near_one(fy)
    special = x_one | y_one
    for i in np.flatnonzero(special):
        out[i] = _f1_at_unit(a, b1, b2, c, fx[i], fy[i], x_one[i], y_one[i], tol, pole)

    rest = ~special
    big = np.maximum(np.abs(fx), np.abs(fy))
    if method == "series":
        if np.any(big[rest] >= 1.0):
            raise DomainError("series branch needs |x|, |y| < 1")
        use_series = rest
    elif method == "euler":
        use_series = np.zeros_like(rest)
    elif method == "auto":
        use_series = rest & (big <= SERIES_RADIUS)
    else:
        raise ValueError(f"unknown method {method!r}")
    use_euler = rest & ~use_series

    out[use_series] = _series_f1(a, b1, b2, c, fx[use_series], fy[use_series])
    if np.any(use_euler):
        out[use_euler] = _euler_f1(a, b1, b2, c, fx[use_euler], fy[use_euler], tol)
    out = out.reshape(shape)
    return complex(out) if (xs and ys) else out


def _f1_at_unit(a, b1, b2, c, x, y, x_one, y_one, tol, pole):
    if x_one and y_one:
        exponent = c - a - b1 - b2
    elif x_one:
        exponent = c - a - b1
    else:
        exponent = c - a - b2
    if exponent <= 0:
        if pole == "raise":
            raise PoleError(f"F1 diverges at x={x}, y={y}")
        return complex(np.nan, np.nan)
    if x_one and y_one:
        return _gamma_ratio([c, c - a - b1 - b2], [c - a, c - b1 - b2])
    if x_one:
        lead = _gamma_ratio([c, c - a - b1], [c - a, c - b1])
        return lead * gauss_2f1(HypergeometricParams(a, b2, c - b1), y, tol=tol, closed=True)
    lead = _gamma_ratio([c, c - a - b2], [c - a, c - b2])
    return lead * gauss_2f1(HypergeometricParams(a, b1, c - b2), x, tol=tol, closed=True)
