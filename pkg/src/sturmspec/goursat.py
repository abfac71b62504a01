"""Transformation-operator kernel by fixed-point iteration.

The kernel K(x, t) on the triangle 0 <= x <= 1, -x <= t <= x satisfies the
wave equation K_xx - K_tt = q(x) K with data K(x, x) = (1/2) int_0^x q and
K(x, -x) = 0 on the two characteristic lines.  In characteristic coordinates
xi = (x + t)/2, eta = (x - t)/2 the problem becomes

    K_xi_eta = q(xi + eta) K,    K(xi, 0) = (1/2) int_0^xi q,   K(0, eta) = 0,

an integral fixed point K = K0 + D[q K] with D the double cumulative
integral; iteration contracts for any bounded q.  Once solved, the kernel
reproduces the fundamental solutions through

    c(x, mu) = cos(l x) + int_{-x}^{x} K(x, t) cos(l t) dt,
    s(x, mu) = sin(l x)/l + int_{-x}^{x} K(x, t) sin(l t)/l dt,

with l = sqrt(mu), which ``reconstruct_solutions`` evaluates for
cross-checking against direct integration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericsError
from .potential import Potential, _cumulative_trapezoid

DEFAULT_LATTICE = 400
_CONVERGENCE_TOL = 1e-10
_MAX_ITERATIONS = 200


@dataclass(frozen=True)
class GoursatKernel:
    """Kernel samples on the characteristic lattice.

    ``values[i, j]`` is K at xi = i/n, eta = j/n, valid for i + j <= n.  In
    original coordinates these are the points x = (i + j)/n, t = (i - j)/n:
    a uniform lattice over the triangle with t-spacing 2/n at fixed x.
    """

    values: np.ndarray
    lattice: int
    iteration_count: int
    final_update_norm: float
    update_norms: tuple[float, ...]

    def value_at(self, x: float, t: float):
        """Bilinear interpolation in characteristic coordinates."""
        n = self.lattice
        xi = 0.5 * (x + t) * n
        eta = 0.5 * (x - t) * n
        if xi < -1e-9 or eta < -1e-9 or xi + eta > n + 1e-9:
            raise InputError(f"point (x={x:g}, t={t:g}) outside the kernel domain")
        i0 = min(int(np.floor(xi)), n - 1)
        j0 = min(int(np.floor(eta)), n - 1)
        fx, fy = xi - i0, eta - j0
        v = self.values
        return (
            v[i0, j0] * (1 - fx) * (1 - fy)
            + v[i0 + 1, j0] * fx * (1 - fy)
            + v[i0, j0 + 1] * (1 - fx) * fy
            + v[i0 + 1, j0 + 1] * fx * fy
        )

    def slice_at(self, x_index: int):
        """(t values, K values) along fixed x = x_index / lattice."""
        k = x_index
        if not 0 <= k <= self.lattice:
            raise InputError(f"x index {k} outside lattice 0..{self.lattice}")
        i = np.arange(k + 1)
        t = (2 * i - k) / self.lattice
        return t, self.values[i, k - i]

    def diagonal(self) -> np.ndarray:
        """K(x, x) at the lattice abscissas x = i/n (the xi-axis boundary)."""
        return self.values[:, 0].copy()

    def sup_abs(self) -> float:
        n = self.lattice
        i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
        return float(np.max(np.abs(np.where(i + j <= n, self.values, 0.0))))


@dataclass(frozen=True)
class ShiftedKernelView:
    """The midpoint-shifted kernel N(x, t) = K(x - 1/2, t - 1/2).

    Exposed on the wedge 1/2 <= x <= 1, |t - 1/2| <= x - 1/2, where the
    shift maps directly into the kernel's triangle.  Along the
    characteristic side t = 1 - x the view vanishes identically.
    """

    kernel: GoursatKernel

    def value_at(self, x: float, t: float):
        if x < 0.5 - 1e-12:
            raise InputError("shifted view is defined on the wedge x >= 1/2")
        return self.kernel.value_at(x - 0.5, t - 0.5)

    def boundary_residual(self, points: int = 64) -> float:
        """sup |N(1 - u, u)| sampled along the vanishing characteristic side."""
        u = np.linspace(0.0, 0.5, points)
        vals = [self.value_at(1.0 - ui, ui) for ui in u]
        return float(np.max(np.abs(vals)))

    def diagonal_at(self, x: float):
        """N(x, x) for x in [1/2, 1]; equals (1/2) int_0^(x - 1/2) q."""
        return self.value_at(x, x)


def _cumtrapz_axis(values: np.ndarray, dx: float, axis: int) -> np.ndarray:
    mov = np.moveaxis(values, axis, 0)
    out = np.zeros_like(mov)
    np.cumsum((mov[1:] + mov[:-1]) * (0.5 * dx), axis=0, out=out[1:])
    return np.moveaxis(out, 0, axis)


def solve_kernel(p: Potential, lattice: int = DEFAULT_LATTICE) -> GoursatKernel:
    """Solve the characteristic boundary problem for the kernel.

    ``lattice`` is the number of subdivisions per characteristic axis and
    must be at least the potential's node count so no potential detail is
    lost on the coarser grid.
    """
    a, b = p.interval
    if abs(a) > 1e-12 or abs(b - 1.0) > 1e-12:
        raise InputError("kernel solver requires a potential on [0, 1]")
    if lattice < p.nodes_count:
        raise InputError(
            f"lattice {lattice} coarser than the potential grid ({p.nodes_count}); "
            "refine the lattice or coarsen the potential"
        )
    n = lattice
    h = 1.0 / n
    axis = np.linspace(0.0, 1.0, n + 1)
    q_axis = p(axis)

    # boundary data: the fixed-point base K0(xi, eta) = K(xi, 0) = half the
    # running integral of q; the K(0, eta) = 0 side is automatic since the
    # integral vanishes at xi = 0
    diag_data = 0.5 * _cumulative_trapezoid(q_axis, h)
    base = np.broadcast_to(diag_data[:, None], (n + 1, n + 1)).copy()

    i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    inside = i + j <= n
    # q evaluated at x = xi + eta, zero outside the triangle so cumulative
    # integrals to interior points never read invalid values
    q_sum = np.where(inside, np.interp(np.clip((i + j) * h, 0.0, 1.0), axis, q_axis), 0.0)
    base = np.where(inside, base, 0.0)

    k_grid = base.copy()
    scale = 1.0 + float(np.max(np.abs(base)))
    norms = []
    for iteration in range(1, _MAX_ITERATIONS + 1):
        integrand = q_sum * k_grid
        update = _cumtrapz_axis(_cumtrapz_axis(integrand, h, 0), h, 1)
        new_grid = np.where(inside, base + update, 0.0)
        delta = float(np.max(np.abs(new_grid - k_grid)))
        norms.append(delta)
        k_grid = new_grid
        if delta <= _CONVERGENCE_TOL * scale:
            return GoursatKernel(
                values=k_grid,
                lattice=n,
                iteration_count=iteration,
                final_update_norm=delta,
                update_norms=tuple(norms),
            )
    raise NumericsError(
        f"kernel iteration did not converge in {_MAX_ITERATIONS} sweeps "
        f"(last update {norms[-1]:.3e})"
    )


def _wave_pair(mu: float, t: np.ndarray):
    """cos-type and sin-type comparison functions at spectral parameter mu."""
    if mu > 0.0:
        lam = np.sqrt(mu)
        return np.cos(lam * t), np.sin(lam * t) / lam
    if mu < 0.0:
        kap = np.sqrt(-mu)
        return np.cosh(kap * t), np.sinh(kap * t) / kap
    return np.ones_like(t), t.astype(float)


def reconstruct_solutions(kernel: GoursatKernel, mu: float, x: float):
    """Evaluate the integral representations of c(x, mu) and s(x, mu).

    ``x`` must land on the kernel lattice.  Negative mu uses the hyperbolic
    continuation; mu = 0 uses the limiting forms cos -> 1, sin(l t)/l -> t.
    """
    n = kernel.lattice
    k = round(x * n)
    if abs(k / n - x) > 1e-9:
        raise InputError(f"x={x:g} is not a lattice abscissa (lattice {n})")
    cos_x, sin_x = _wave_pair(mu, np.array([x]))
    if k == 0:
        return complex(cos_x[0]) if np.iscomplexobj(kernel.values) else float(cos_x[0]), (
            complex(sin_x[0]) if np.iscomplexobj(kernel.values) else float(sin_x[0])
        )
    t, kv = kernel.slice_at(k)
    cos_t, sin_t = _wave_pair(mu, t)
    dt = 2.0 / n
    c_val = cos_x[0] + np.trapezoid(kv * cos_t, dx=dt)
    s_val = sin_x[0] + np.trapezoid(kv * sin_t, dx=dt)
    if np.iscomplexobj(kernel.values):
        return complex(c_val), complex(s_val)
    return float(c_val), float(s_val)


def shifted_kernel_view(kernel: GoursatKernel) -> ShiftedKernelView:
    """Midpoint-shifted view used by the midpoint-normalized solutions."""
    return ShiftedKernelView(kernel=kernel)
