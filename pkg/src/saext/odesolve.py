"""Complex second-order linear ODE engine: -f'' + V(x) f = lam f.

The equation is integrated as the first-order system (f, f') with scipy's
adaptive Dormand-Prince 5(4) pair, restarting at potential breakpoints so
the integrator never steps across a jump.  Dense output lives on a
deterministic per-piece uniform grid (spacing <= a/512); every solution of
the same potential over the same span shares that grid, which makes
pointwise linear combinations and Simpson quadrature between solutions
well defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson, solve_ivp

from .errors import GridError, IntegrationError

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12

_INTERVALS_PER_HALFWIDTH = 512  # dense spacing target a/512, well under the a/128 contract
_MIN_SEGMENT_INTERVALS = 8


@dataclass(frozen=True)
class OdeSolution:
    """Dense trajectory of -f'' + V f = lam f with its derivative.

    Attributes:
        lam: spectral parameter (i for deficiency solves, real E otherwise).
        x0, x1: integration endpoints (x strictly monotone from x0 to x1).
        f0, df0: initial values f(x0), f'(x0).
        x, f, df: sample abscissae and values; x[0] == x0, x[-1] == x1.
        segments: index of the first sample of each smooth piece; quadrature
            and differentiation operate piecewise so jumps in V never sit
            inside a stencil.
    """

    lam: complex
    x0: float
    x1: float
    f0: complex
    df0: complex
    x: np.ndarray
    f: np.ndarray
    df: np.ndarray
    segments: tuple

    @property
    def f1(self):
        return self.f[-1]

    @property
    def df1(self):
        return self.df[-1]

    @property
    def samples(self):
        """The dense output as (x, f, f') triples."""
        return list(zip(self.x, self.f, self.df))

    def scaled(self, c):
        """The trajectory for initial data c*(f0, df0); exact by linearity."""
        c = complex(c)
        return OdeSolution(self.lam, self.x0, self.x1, c * self.f0, c * self.df0,
                           self.x, c * self.f, c * self.df, self.segments)

    def segment_slices(self):
        """Per-piece index slices; junction samples belong to both neighbours."""
        stops = (*self.segments[1:], len(self.x) - 1)
        return [slice(lo, hi + 1) for lo, hi in zip(self.segments, stops)]


def _segment_grid(p, x0, x1):
    """Per-piece uniform abscissae from x0 to x1 plus the piece boundaries.

    Returns (list of (lo, hi, V callable), list of per-piece grids), both in
    integration order.  Grids share their junction points.
    """
    lo, hi = (x0, x1) if x1 > x0 else (x1, x0)
    edges = [lo] + [b for b in p.breakpoints() if lo < b < hi] + [hi]
    h_target = p.a / _INTERVALS_PER_HALFWIDTH
    pieces = []
    for s_lo, s_hi in zip(edges[:-1], edges[1:]):
        n = max(_MIN_SEGMENT_INTERVALS, int(np.ceil((s_hi - s_lo) / h_target)))
        grid = np.linspace(s_lo, s_hi, n + 1)
        pieces.append((s_lo, s_hi, p.piece_callable(s_lo, s_hi), grid))
    if x1 < x0:
        pieces = [(s_hi, s_lo, vf, grid[::-1]) for s_lo, s_hi, vf, grid in pieces[::-1]]
    return pieces


def _solve_segment(vfun, lam, grid, y0, rtol, atol):
    def rhs(t, y):
        return np.array([y[1], (vfun(t) - lam) * y[0]])

    sol = solve_ivp(rhs, (grid[0], grid[-1]), y0, method="RK45",
                    t_eval=grid, rtol=rtol, atol=atol, dense_output=False)
    if not sol.success:
        x_fail = float(sol.t[-1]) if len(sol.t) else float(grid[0])
        raise IntegrationError(f"integration failed near x = {x_fail}: {sol.message}",
                               x_fail=x_fail)
    return sol.y


def integrate(p, lam, x0, x1, f0, df0, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Integrate -f'' + V f = lam f from x0 to x1 with dense output.

    Args:
        p: the Potential (both endpoints must lie in [-a, a]).
        lam: complex spectral parameter.
        x0, x1: distinct endpoints; integration may run in either direction.
        f0, df0: initial values f(x0), f'(x0).
        rtol, atol: local error control, both positive.

    Returns:
        OdeSolution with dense samples spaced at most a/512 apart.

    Raises:
        IntegrationError: when the step size underflows; carries the abscissa.
    """
    if x0 == x1:
        raise ValueError("x0 and x1 must differ")
    if rtol <= 0 or atol <= 0:
        raise ValueError("rtol and atol must be positive")
    lam = complex(lam)
    y = np.array([f0, df0], dtype=complex)

    xs, fs, dfs, seg_starts = [], [], [], []
    count = 0
    for _, _, vfun, grid in _segment_grid(p, x0, x1):
        ys = _solve_segment(vfun, lam, grid, y, rtol, atol)
        skip = 1 if count else 0  # junction point already recorded
        seg_starts.append(count - skip)
        xs.append(grid[skip:])
        fs.append(ys[0, skip:])
        dfs.append(ys[1, skip:])
        count += len(grid) - skip
        y = ys[:, -1].copy()

    x = np.concatenate(xs)
    x.setflags(write=False)
    f = np.concatenate(fs)
    f.setflags(write=False)
    df = np.concatenate(dfs)
    df.setflags(write=False)
    return OdeSolution(lam, float(x0), float(x1), complex(f0), complex(df0),
                       x, f, df, tuple(seg_starts))


def propagate(p, lam, x0, x1, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Transfer matrix T with (f, f')(x1) = T @ (f, f')(x0).

    Both fundamental solutions are advanced in one integrator run with no
    dense output; this is the fast path for boundary-determinant scans.
    """
    lam = complex(lam)
    T = np.eye(2, dtype=complex)
    for _, _, vfun, grid in _segment_grid(p, x0, x1):
        def rhs(t, y):
            return np.concatenate([y[2:], (vfun(t) - lam) * y[:2]])

        y0 = np.concatenate([T[0], T[1]])
        sol = solve_ivp(rhs, (grid[0], grid[-1]), y0, method="RK45",
                        rtol=rtol, atol=atol)
        if not sol.success:
            x_fail = float(sol.t[-1]) if len(sol.t) else float(grid[0])
            raise IntegrationError(f"integration failed near x = {x_fail}: {sol.message}",
                                   x_fail=x_fail)
        T = sol.y[:, -1].reshape(2, 2)
    return T


def _same_grid(u, w):
    return (u.x.shape == w.x.shape and np.array_equal(u.x, w.x)
            and u.segments == w.segments)


def quadrature(sol, values):
    """Composite Simpson integral of sampled values over sol's grid.

    Integrates piece by piece so discontinuities of V stay on panel edges.
    """
    total = 0.0 + 0.0j
    for sl in sol.segment_slices():
        total += simpson(values[sl], x=sol.x[sl])
    return total


def l2_inner(u, w):
    """L2 inner product <u, w> = integral conj(u) w, conjugate-linear in u.

    Raises:
        GridError: when the two trajectories do not share abscissae.
    """
    if not _same_grid(u, w):
        raise GridError("solutions sampled on different grids")
    return complex(quadrature(u, np.conj(u.f) * w.f))


def norm(u):
    """L2 norm of the trajectory."""
    return float(np.sqrt(max(l2_inner(u, u).real, 0.0)))


def combine(solutions, coeffs):
    """Pointwise linear combination sum_k c_k u_k on a shared grid."""
    base = solutions[0]
    for other in solutions[1:]:
        if not _same_grid(base, other) or other.lam != base.lam:
            raise GridError("cannot combine solutions from different grids or lambdas")
    f = sum(c * s.f for c, s in zip(coeffs, solutions))
    df = sum(c * s.df for c, s in zip(coeffs, solutions))
    f0 = sum(c * s.f0 for c, s in zip(coeffs, solutions))
    df0 = sum(c * s.df0 for c, s in zip(coeffs, solutions))
    return OdeSolution(base.lam, base.x0, base.x1, f0, df0, base.x, f, df, base.segments)


def wronskian(u, w):
    """Samplewise Wronskian u w' - u' w (no conjugation); constant in x
    for two solutions of the same equation."""
    if not _same_grid(u, w):
        raise GridError("solutions sampled on different grids")
    return u.f * w.df - u.df * w.f


def potential_on_grid(p, sol):
    """V sampled on the solution grid using per-piece (left-limit) values."""
    out = np.empty_like(sol.x)
    for sl in sol.segment_slices():
        xs = sol.x[sl]
        lo, hi = (xs[0], xs[-1]) if xs[-1] > xs[0] else (xs[-1], xs[0])
        out[sl] = p.piece_callable(lo, hi)(xs)
    return out
