"""Fundamental solutions of -y'' + q(x) y = mu y by fixed-step integration.

Two solutions are propagated together from the left endpoint: the
cosine-type solution ``c`` with c = 1, c' = 0 and the sine-type solution
``s`` with s = 0, s' = 1.  Every boundary-value spectrum of interest is the
zero set of a combination of their values at the right endpoint and at the
interval midpoint, so the integrator exposes exactly those values.

The stepper is the classical 4th-order Runge-Kutta method with a fixed step,
vectorized over a whole batch of spectral-parameter values: the dominant use
case is scanning characteristic functions over hundreds of mu values, and a
single batched sweep amortizes the per-step cost across the batch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericsError
from .potential import Potential

#: magnitude cap: solutions grow like cosh(sqrt(q - mu) x) for mu far below q
_OVERFLOW_LIMIT = 1e150
_OVERFLOW_CHECK_EVERY = 32


@dataclass(frozen=True)
class FundamentalTrajectory:
    """Values of both fundamental solutions along the integration grid."""

    grid: np.ndarray
    c: np.ndarray
    cp: np.ndarray
    s: np.ndarray
    sp: np.ndarray
    mu: float


@dataclass(frozen=True)
class EndpointData:
    """The eight scalars used by every characteristic function: values of
    c, c', s, s' at the right endpoint and at the interval midpoint."""

    c1: float
    cp1: float
    s1: float
    sp1: float
    c_half: float
    cp_half: float
    s_half: float
    sp_half: float
    mu: float


@dataclass(frozen=True)
class EndpointScan:
    """Batched endpoint/midpoint values over an array of mu values."""

    mus: np.ndarray
    c1: np.ndarray
    cp1: np.ndarray
    s1: np.ndarray
    sp1: np.ndarray
    c_half: np.ndarray
    cp_half: np.ndarray
    s_half: np.ndarray
    sp_half: np.ndarray


@dataclass(frozen=True)
class MidpointSolutions:
    """Solutions normalized at the midpoint: y1 = 1, y1' = 0 and y2 = 0,
    y2' = 1 there.  Built from the fundamental pair by the exact linear
    combinations y1 = s'(h) c - c'(h) s and y2 = c(h) s - s(h) c with h the
    midpoint."""

    grid: np.ndarray
    y1: np.ndarray
    y1p: np.ndarray
    y2: np.ndarray
    y2p: np.ndarray
    mu: float


def default_steps(p: Potential) -> int:
    """Two integrator steps per potential node; even so the midpoint is hit."""
    steps = 2 * p.nodes_count
    return steps + (steps % 2)


def _stage_potential(p: Potential, steps: int):
    """Potential values at step endpoints and midpoints (three per step)."""
    a, b = p.interval
    xs = np.linspace(a, b, 2 * steps + 1)
    qs = p(xs)
    return qs[0:-1:2], qs[1::2], qs[2::2]


def _sweep(p: Potential, mus: np.ndarray, steps: int, record: bool):
    """Propagate the fundamental pair across the interval for every mu.

    Returns (U, V, mid_snapshot, history) where U[0]/U[1] are c/s values and
    V[0]/V[1] their derivatives at the right endpoint; mid_snapshot holds the
    same four arrays at the midpoint.  With ``record`` the full per-step
    history is kept.
    """
    if steps < 2:
        raise InputError("steps must be >= 2")
    if steps % 2:
        steps += 1
    mus = np.atleast_1d(np.asarray(mus, dtype=float))
    q_lo, q_mid, q_hi = _stage_potential(p, steps)
    h = p.length / steps
    n = mus.size
    dtype = complex if p.is_complex else float

    u = np.zeros((2, n), dtype=dtype)
    v = np.zeros((2, n), dtype=dtype)
    u[0] = 1.0  # c(a) = 1
    v[1] = 1.0  # s'(a) = 1

    mid_index = steps // 2
    mid = None
    history_u = history_v = None
    if record:
        history_u = np.empty((steps + 1, 2, n), dtype=dtype)
        history_v = np.empty((steps + 1, 2, n), dtype=dtype)
        history_u[0] = u
        history_v[0] = v

    half_h = 0.5 * h
    sixth_h = h / 6.0
    for k in range(steps):
        w_lo = q_lo[k] - mus
        w_mid = q_mid[k] - mus
        w_hi = q_hi[k] - mus

        k1u = v
        k1v = w_lo * u
        u2 = u + half_h * k1u
        k2u = v + half_h * k1v
        k2v = w_mid * u2
        u3 = u + half_h * k2u
        k3u = v + half_h * k2v
        k3v = w_mid * u3
        u4 = u + h * k3u
        k4u = v + h * k3v
        k4v = w_hi * u4

        u = u + sixth_h * (k1u + 2.0 * (k2u + k3u) + k4u)
        v = v + sixth_h * (k1v + 2.0 * (k2v + k3v) + k4v)

        if record:
            history_u[k + 1] = u
            history_v[k + 1] = v
        if k + 1 == mid_index:
            mid = (u.copy(), v.copy())
        if (k + 1) % _OVERFLOW_CHECK_EVERY == 0 or k + 1 == steps:
            peak = max(np.max(np.abs(u)), np.max(np.abs(v)))
            if not np.isfinite(peak) or peak > _OVERFLOW_LIMIT:
                raise NumericsError(
                    f"solution magnitude exceeded {_OVERFLOW_LIMIT:.0e} by step {k + 1} "
                    f"of {steps} (mu range [{mus.min():g}, {mus.max():g}])"
                )
    return u, v, mid, (history_u, history_v), steps


def endpoint_scan(p: Potential, mus, steps: int | None = None) -> EndpointScan:
    """Endpoint and midpoint values of the fundamental pair for a batch of mu."""
    steps = default_steps(p) if steps is None else steps
    mus = np.atleast_1d(np.asarray(mus, dtype=float))
    u, v, mid, _, _ = _sweep(p, mus, steps, record=False)
    mu_u, mu_v = mid
    return EndpointScan(
        mus=mus,
        c1=u[0], cp1=v[0], s1=u[1], sp1=v[1],
        c_half=mu_u[0], cp_half=mu_v[0], s_half=mu_u[1], sp_half=mu_v[1],
    )


def endpoint_data(p: Potential, mu: float, steps: int | None = None) -> EndpointData:
    scan = endpoint_scan(p, [mu], steps=steps)
    pick = lambda arr: arr[0] if p.is_complex else float(arr[0])
    return EndpointData(
        c1=pick(scan.c1), cp1=pick(scan.cp1), s1=pick(scan.s1), sp1=pick(scan.sp1),
        c_half=pick(scan.c_half), cp_half=pick(scan.cp_half),
        s_half=pick(scan.s_half), sp_half=pick(scan.sp_half),
        mu=float(mu),
    )


def integrate_fundamental(p: Potential, mu: float, steps: int | None = None) -> FundamentalTrajectory:
    """Full trajectory of c, c', s, s' on a uniform grid over the interval."""
    steps = default_steps(p) if steps is None else steps
    _, _, _, (hu, hv), steps = _sweep(p, np.array([float(mu)]), steps, record=True)
    a, b = p.interval
    return FundamentalTrajectory(
        grid=np.linspace(a, b, steps + 1),
        c=hu[:, 0, 0], cp=hv[:, 0, 0], s=hu[:, 1, 0], sp=hv[:, 1, 0],
        mu=float(mu),
    )


def wronskian_residual(t: FundamentalTrajectory) -> float:
    """Max deviation of c s' - c' s from 1 along the grid (integrator health)."""
    return float(np.max(np.abs(t.c * t.sp - t.cp * t.s - 1.0)))


def midpoint_solutions(p: Potential, mu: float, steps: int | None = None) -> MidpointSolutions:
    """Midpoint-normalized solution pair along the grid."""
    steps = default_steps(p) if steps is None else steps
    traj = integrate_fundamental(p, mu, steps=steps)
    mid = traj.grid.size // 2
    c_h, cp_h = traj.c[mid], traj.cp[mid]
    s_h, sp_h = traj.s[mid], traj.sp[mid]
    return MidpointSolutions(
        grid=traj.grid,
        y1=sp_h * traj.c - cp_h * traj.s,
        y1p=sp_h * traj.cp - cp_h * traj.sp,
        y2=c_h * traj.s - s_h * traj.c,
        y2p=c_h * traj.sp - s_h * traj.cp,
        mu=float(mu),
    )


def fundamental_from_midpoint(ms: MidpointSolutions) -> tuple[np.ndarray, np.ndarray]:
    """Invert the midpoint normalization: rebuild c and s from y1, y2.

    Uses the left-endpoint values of the midpoint pair, which encode the
    midpoint values of the fundamental pair; the two normalizations are
    mutually inverse linear maps.
    """
    y1_0, y2_0 = ms.y1[0], ms.y2[0]
    y1p_0, y2p_0 = ms.y1p[0], ms.y2p[0]
    c = y2p_0 * ms.y1 - y1p_0 * ms.y2
    s = -y2_0 * ms.y1 + y1_0 * ms.y2
    return c, s
