"""
Gauss-Legendre rules and adaptive Gauss-Kronrod integration.

All integrands are complex valued functions of a real variable and are
called with numpy arrays of abscissae, so one call evaluates a whole
Kronrod panel (or many panels at once, see :func:`integrate_family`).

The adaptive scheme is the classic globally adaptive bisection: keep a
pool of panels, always split the panel with the largest error estimate,
stop once the summed estimate drops below the requested tolerance.
Panels that reach ``max_depth`` are frozen; if frozen panels alone keep
the estimate above tolerance the result is flagged ``converged=False``
instead of raising.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "QuadratureRule",
    "IntegrationResult",
    "BatchResult",
    "gauss_legendre_rule",
    "kronrod_15_rule",
    "gauss_kronrod_15",
    "adaptive_integrate",
    "integrate_segment",
    "integrate_family",
    "DEFAULT_MAX_DEPTH",
]

DEFAULT_MAX_DEPTH = 48
DEFAULT_MAX_INTERVALS = 4000

# (7, 15) Gauss-Kronrod pair, non-negative half of the nodes (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss weights attached to _XGK[1], _XGK[3], _XGK[5], _XGK[7].
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

K15_NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[:7][::-1]])
K15_WEIGHTS = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[:7][::-1]])
_G7_FULL = np.zeros(8)
_G7_FULL[1::2] = _WG
G7_WEIGHTS_ON_K15 = np.concatenate([_G7_FULL[:7], [_G7_FULL[7]], _G7_FULL[:7][::-1]])


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on [-1, 1] together with the degree of exactness."""

    nodes: np.ndarray
    weights: np.ndarray
    degree: int

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, f: Callable, a: float = -1.0, b: float = 1.0):
        """Apply the rule to ``f`` on [a, b] (affine map of the nodes)."""
        half = 0.5 * (b - a)
        mid = 0.5 * (b + a)
        fx = np.broadcast_to(np.asarray(f(mid + half * self.nodes)), self.nodes.shape)
        return half * np.dot(self.weights, fx)


@dataclass(frozen=True)
class IntegrationResult:
    value: complex
    error_estimate: float
    subdivisions: int
    converged: bool


@dataclass(frozen=True)
class BatchResult:
    """Element-wise results of :func:`integrate_family`."""

    value: np.ndarray
    error_estimate: np.ndarray
    subdivisions: np.ndarray
    converged: np.ndarray

    def __len__(self) -> int:
        return len(self.value)

    def __getitem__(self, i: int) -> IntegrationResult:
        return IntegrationResult(
            complex(self.value[i]),
            float(self.error_estimate[i]),
            int(self.subdivisions[i]),
            bool(self.converged[i]),
        )


def _legendre_and_derivative(n: int, x: np.ndarray):
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre_rule(n: int) -> QuadratureRule:
    """
    n-point Gauss-Legendre rule on [-1, 1].

    Nodes come from the eigenvalues of the symmetric tridiagonal Jacobi
    matrix of the Legendre recurrence (Golub-Welsch), followed by one
    Newton step on P_n to clean up the last few ulps. Weights use the
    classical formula 2 / ((1 - x^2) P_n'(x)^2).
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or not 1 <= n <= 64:
        raise InvalidArgumentError(f"Gauss-Legendre order must be an integer in [1, 64], got {n!r}")
    n = int(n)
    if n == 1:
        return QuadratureRule(np.array([0.0]), np.array([2.0]), 1)

    k = np.arange(1, n)
    offdiag = k / np.sqrt(4.0 * k * k - 1.0)
    jacobi = np.diag(offdiag, 1) + np.diag(offdiag, -1)
    x = np.linalg.eigvalsh(jacobi)

    p, dp = _legendre_and_derivative(n, x)
    x = x - p / dp
    # exact symmetry about the origin
    x = 0.5 * (x - x[::-1])
    if n % 2:
        x[n // 2] = 0.0
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(x, w, 2 * n - 1)


def kronrod_15_rule() -> QuadratureRule:
    """The embedded 15-point Kronrod extension of the 7-point Gauss rule."""
    return QuadratureRule(K15_NODES.copy(), K15_WEIGHTS.copy(), 22)


def _k15_panels(fx: np.ndarray, half: np.ndarray):
    """
    Kronrod value and QUADPACK-style error estimate for each row of ``fx``.

    ``fx`` has shape (K, 15): integrand values at the mapped K15 nodes of
    K panels with half-widths ``half``.
    """
    # row sums instead of matmul: BLAS may reorder the additions depending
    # on how many panels are stacked, and results must not depend on that
    with np.errstate(all="ignore"):
        resk = (fx * K15_WEIGHTS).sum(axis=1)
        resg = (fx * G7_WEIGHTS_ON_K15).sum(axis=1)
        mean = 0.5 * resk
        resasc = (np.abs(fx - mean[:, None]) * K15_WEIGHTS).sum(axis=1) * np.abs(half)
        value = resk * half
        err = np.abs((resk - resg) * half)
    scale = (resasc != 0) & (err != 0)
    err[scale] = resasc[scale] * np.minimum(1.0, (200.0 * err[scale] / resasc[scale]) ** 1.5)
    bad = ~np.isfinite(value)
    err[bad | ~np.isfinite(err)] = np.inf
    return value, err


def _evaluate_panels(f, lo, hi, params):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * K15_NODES
    with np.errstate(all="ignore"):
        fx = f(x, params[:, None])
    fx = np.broadcast_to(np.asarray(fx, dtype=complex), x.shape)
    return _k15_panels(fx, half)


def _unresolvable(lo: float, hi: float) -> bool:
    # children this narrow would put outer nodes onto the panel ends in floating point
    quarter = 0.25 * (hi - lo) * (1.0 - _XGK[0])
    return quarter <= 4.0 * np.finfo(float).eps * max(abs(lo), abs(hi))


def _extrapolate_tail(f, param, lo, hi, a, b):
    """
    Geometric tail estimate for a frozen panel that touches an end point.

    With an algebraic end point singularity the integrals over the dyadic
    rings [e + 2^k h, e + 2^(k+1) h] next to the end point e decay with a
    fixed ratio, so the panel [e, e + h] is the sum of the geometric series
    continued from the rings. Returns ``(value, error)`` or ``None`` when
    the ratios are inconsistent or do not decay (non-integrable case).
    """
    h = hi - lo
    sign = 1.0 if hi == b else -1.0
    end = b if hi == b else a
    if 8.0 * h > b - a:
        return None
    inner = end - sign * h * np.array([1.0, 2.0, 4.0])
    outer = end - sign * h * np.array([2.0, 4.0, 8.0])
    ring_lo, ring_hi = np.minimum(inner, outer), np.maximum(inner, outer)
    q, e = _evaluate_panels(f, ring_lo, ring_hi, np.full(3, param))
    if not np.all(np.isfinite(q)) or q[1] == 0 or q[2] == 0:
        return None
    r1, r2 = q[0] / q[1], q[1] / q[2]
    if not (abs(r1) < 0.95 and abs(r2) < 0.95):
        return None
    value = q[0] * r1 / (1.0 - r1)
    alt = q[0] * r2 / (1.0 - r2)
    err = abs(value - alt) + float(np.sum(e)) * abs(r1) / (1.0 - abs(r1))
    return value, err


def _check_interval(a, b):
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise InvalidArgumentError(f"need finite a < b, got [{a}, {b}]")


def gauss_kronrod_15(f: Callable, a: float, b: float) -> IntegrationResult:
    """Single (7, 15) Gauss-Kronrod panel on [a, b], no subdivision."""
    a, b = float(a), float(b)
    _check_interval(a, b)

    def row(x, _):
        # a single panel: hand the integrand a flat array of the 15 nodes
        return np.broadcast_to(np.asarray(f(x.ravel())), (x.size,)).reshape(x.shape)

    value, err = _evaluate_panels(row, np.array([a]), np.array([b]), np.zeros(1))
    finite = bool(np.isfinite(value[0]))
    return IntegrationResult(complex(value[0]), float(err[0]), 1, finite)


def integrate_family(
    f: Callable,
    params=None,
    a: float = 0.0,
    b: float = 1.0,
    tol: float = 1e-10,
    rel_tol: float = 0.0,
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_intervals: int = DEFAULT_MAX_INTERVALS,
    breakpoints=None,
) -> BatchResult:
    """
    Integrate a parametrised family of integrands over the same interval.

    Parameters
    ----------
    f : callable
        ``f(x, p)`` with ``x`` a (K, 15) array of abscissae and ``p`` a
        (K, 1) array holding the parameter of each row. Must return values
        broadcastable to ``x.shape``.
    params : array_like, optional
        One parameter per integral. ``None`` means a single integral.
    a, b : float
        Integration limits.
    tol, rel_tol : float
        Stop once the summed error estimate is below
        ``max(tol, rel_tol * |value|)``.
    max_depth : int
        Maximum number of bisections applied to any one panel.
    max_intervals : int
        Hard cap on panels per integral.
    breakpoints : sequence of float, optional
        Interior points used to seed the initial partition.

    Returns
    -------
    BatchResult
        Each integral is refined independently of the others, so entry i
        is the same as integrating ``params[i]`` on its own.
    """
    a, b = float(a), float(b)
    _check_interval(a, b)
    if not tol > 0 and not rel_tol > 0:
        raise InvalidArgumentError("tolerance must be positive")
    params = np.zeros(1) if params is None else np.atleast_1d(np.asarray(params))
    n_items = len(params)
    edges = [a] + sorted(float(p) for p in (breakpoints or ()) if a < p < b) + [b]
    n_init = len(edges) - 1

    lo0 = np.tile(edges[:-1], n_items).astype(float)
    hi0 = np.tile(edges[1:], n_items).astype(float)
    owner = np.repeat(np.arange(n_items), n_init)
    vals, errs = _evaluate_panels(f, lo0, hi0, params[owner])

    heaps: list[list] = [[] for _ in range(n_items)]
    frozen: list[list] = [[] for _ in range(n_items)]
    active_err = np.zeros(n_items)
    frozen_err = np.zeros(n_items)
    running = np.zeros(n_items, dtype=complex)
    count = np.full(n_items, n_init)
    finite = np.ones(n_items, dtype=bool)
    for j in range(len(owner)):
        i = owner[j]
        heapq.heappush(heaps[i], (-errs[j], j, 0, lo0[j], hi0[j], vals[j], errs[j]))
        active_err[i] += errs[j]
        running[i] += vals[j]
        finite[i] &= bool(np.isfinite(vals[j]))
    serial = len(owner)

    done = ~finite
    converged = np.zeros(n_items, dtype=bool)
    while True:
        new_lo, new_hi, new_owner, new_depth = [], [], [], []
        for i in np.flatnonzero(~done):
            heap = heaps[i]
            target = max(tol, rel_tol * abs(running[i]))
            while True:
                total = active_err[i] + frozen_err[i]
                if total <= target:
                    converged[i] = True
                    done[i] = True
                    break
                if not heap or count[i] >= max_intervals or (
                    frozen_err[i] > target and active_err[i] <= target
                ):
                    done[i] = True
                    break
                entry = heapq.heappop(heap)
                _, _, depth, lo, hi, val, err = entry
                if depth >= max_depth or _unresolvable(lo, hi):
                    active_err[i] = max(active_err[i] - err, 0.0)
                    if lo == a or hi == b:
                        tail = _extrapolate_tail(f, params[i], lo, hi, a, b)
                        if tail is not None and tail[1] < err:
                            running[i] += tail[0] - val
                            val, err = tail
                            entry = entry[:5] + (val, err)
                    frozen[i].append(entry)
                    frozen_err[i] += err
                    continue
                active_err[i] = max(active_err[i] - err, 0.0)
                running[i] -= val
                mid = 0.5 * (lo + hi)
                new_lo += [lo, mid]
                new_hi += [mid, hi]
                new_owner += [i, i]
                new_depth += [depth + 1, depth + 1]
                count[i] += 1
                break
        if not new_owner:
            break
        lo_arr = np.array(new_lo)
        hi_arr = np.array(new_hi)
        own_arr = np.array(new_owner)
        vals, errs = _evaluate_panels(f, lo_arr, hi_arr, params[own_arr])
        for j in range(len(own_arr)):
            i = own_arr[j]
            heapq.heappush(
                heaps[i], (-errs[j], serial, new_depth[j], lo_arr[j], hi_arr[j], vals[j], errs[j])
            )
            serial += 1
            active_err[i] += errs[j]
            running[i] += vals[j]
            if not np.isfinite(vals[j]):
                finite[i] = False
                done[i] = True

    value = np.empty(n_items, dtype=complex)
    error = np.empty(n_items)
    for i in range(n_items):
        panels = sorted(heaps[i] + frozen[i], key=lambda e: e[3])
        if finite[i]:
            value[i] = complex(
                math.fsum(e[5].real for e in panels), math.fsum(e[5].imag for e in panels)
            )
            error[i] = math.fsum(e[6] for e in panels)
        else:
            value[i] = complex(np.sum([e[5] for e in panels]))
            error[i] = np.inf
    converged &= finite
    return BatchResult(value, error, count.copy(), converged)


def adaptive_integrate(
    f: Callable,
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = DEFAULT_MAX_DEPTH,
    rel_tol: float = 0.0,
) -> IntegrationResult:
    """Globally adaptive (7, 15) Gauss-Kronrod integration of ``f`` over [a, b]."""
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    return integrate_family(
        lambda x, _: f(x), None, a, b, tol=tol, rel_tol=rel_tol, max_depth=max_depth
    )[0]


def integrate_segment(f: Callable, tol: float = 1e-10, max_depth: int = DEFAULT_MAX_DEPTH) -> IntegrationResult:
    """Integrate ``f`` over [0, 1]; the parameter interval of the path t -> z t."""
    return adaptive_integrate(f, 0.0, 1.0, tol=tol, max_depth=max_depth)
