"""Sampled potentials on an interval and their symmetry structure.

A potential is stored as samples at ``M + 1`` uniform nodes and evaluated
between nodes by piecewise-linear interpolation, which keeps every result
reproducible bit-for-bit at a fixed node count.  All integrals of potentials
use the trapezoid rule on the same grid so quadrature order matches the
interpolation order.

The module also evaluates the two coincidence conditions that govern when
spectra of different boundary-value problems agree:

* mirror symmetry ``q(x) = q(a + b - x)``, and
* the square-integral condition ``q1(x) = (int_b^x q2)**2`` relating the
  even part ``q1`` and odd part ``q2`` of the potential about the interval
  midpoint (checked on ``[0, 1]``, or on ``[0, 1/2]`` for the half-interval
  variant).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

DEFAULT_NODES = 2000

_INTERVAL_TOL = 1e-12


@dataclass(frozen=True)
class Potential:
    """Piecewise-linear potential sampled at uniform nodes of an interval."""

    samples: np.ndarray
    interval: tuple[float, float]
    spec: str = ""

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.ndim != 1 or samples.size < 3:
            raise InputError("potential needs at least 3 samples (M >= 2)")
        if not np.all(np.isfinite(samples)):
            raise InputError("potential samples must be finite")
        a, b = self.interval
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise InputError(f"invalid interval {self.interval!r}")
        if not np.iscomplexobj(samples):
            samples = samples.astype(float)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "interval", (float(a), float(b)))

    @property
    def nodes_count(self) -> int:
        """Number of subintervals M (samples are at M + 1 nodes)."""
        return self.samples.size - 1

    @property
    def length(self) -> float:
        return self.interval[1] - self.interval[0]

    @property
    def is_complex(self) -> bool:
        return bool(np.iscomplexobj(self.samples))

    def nodes(self) -> np.ndarray:
        a, b = self.interval
        return np.linspace(a, b, self.samples.size)

    def __call__(self, x):
        """Evaluate by linear interpolation; clamps to the interval ends."""
        return np.interp(x, self.nodes(), self.samples)

    def sup_abs(self) -> float:
        return float(np.max(np.abs(self.samples)))

    def min_real(self) -> float:
        return float(np.min(self.samples.real))

    def integral(self) -> complex | float:
        val = np.trapezoid(self.samples, dx=self.length / self.nodes_count)
        return complex(val) if self.is_complex else float(val)


@dataclass(frozen=True)
class SymmetryDecomposition:
    """Even/odd split of a potential about the midpoint of [0, 1]."""

    q1: Potential  # even part, q1(x) = q1(1 - x)
    q2: Potential  # odd part, q2(x) = -q2(1 - x)
    g: Potential   # difference q(x) - q(1 - x) = 2 q2


@dataclass(frozen=True)
class ConditionReport:
    """Sup/L2 residuals of a pointwise condition with a verdict."""

    residual_sup: float
    residual_l2: float
    satisfied: bool
    tolerance: float


def _require_interval(p: Potential, interval: tuple[float, float], what: str):
    a, b = p.interval
    if abs(a - interval[0]) > _INTERVAL_TOL or abs(b - interval[1]) > _INTERVAL_TOL:
        raise InputError(f"{what} requires a potential on {list(interval)}, got {list(p.interval)}")


def _cumulative_trapezoid(values: np.ndarray, dx: float) -> np.ndarray:
    out = np.empty(values.size, dtype=values.dtype)
    out[0] = 0.0
    np.cumsum((values[1:] + values[:-1]) * (0.5 * dx), out=out[1:])
    return out


def make_potential(spec, nodes: int | None = None) -> Potential:
    """Build a Potential from a JSON-style spec mapping.

    ``spec`` is ``{"kind": ..., "params": {...}, "interval": [a, b],
    "nodes": M}`` with kinds:

    * ``const``: ``params = {"c": value}``
    * ``poly``: ``params = {"coeffs": [c0, c1, ...]}`` (ascending powers)
    * ``trig``: ``params = {"terms": [{"fn": "cos"|"sin", "amplitude": a,
      "frequency": f, "phase": p}, ...], "offset": o}`` where each term is
      ``a * fn(2*pi*f*x + p)``
    * ``table``: ``params = {"x": [...], "q": [...]}`` with uniformly spaced
      abscissas covering the interval
    * ``bb``: ``params = {"q2": <spec>}``; builds the potential whose even
      part equals the squared running integral of the (odd) ``q2``

    The ``nodes`` argument overrides the spec's node count.
    """
    if not isinstance(spec, dict):
        raise InputError(f"potential spec must be a mapping, got {type(spec).__name__}")
    kind = spec.get("kind")
    params = spec.get("params", {})
    interval = tuple(spec.get("interval", (0.0, 1.0)))
    if len(interval) != 2:
        raise InputError(f"interval must have two endpoints, got {interval!r}")
    m = nodes if nodes is not None else spec.get("nodes", DEFAULT_NODES)
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise InputError(f"node count must be an integer >= 2, got {m!r}")
    a, b = float(interval[0]), float(interval[1])
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise InputError(f"invalid interval {interval!r}")
    xs = np.linspace(a, b, m + 1)

    if kind == "const":
        c = _finite_param(params.get("c", 0.0), "c")
        return Potential(np.full(m + 1, c), (a, b), spec=f"const({c})")
    if kind == "poly":
        coeffs = [_finite_param(c, "coeff") for c in params.get("coeffs", [])]
        if not coeffs:
            raise InputError("poly spec needs nonempty coeffs")
        vals = np.polynomial.polynomial.polyval(xs, coeffs)
        return Potential(vals, (a, b), spec=f"poly({coeffs})")
    if kind == "trig":
        terms = params.get("terms", [])
        if not terms:
            raise InputError("trig spec needs at least one term")
        vals = np.full(m + 1, _finite_param(params.get("offset", 0.0), "offset"))
        label = []
        for t in terms:
            fn = t.get("fn", "cos")
            if fn not in ("cos", "sin"):
                raise InputError(f"trig term fn must be cos or sin, got {fn!r}")
            amp = _finite_param(t.get("amplitude", 1.0), "amplitude")
            freq = _finite_param(t.get("frequency", 1.0), "frequency")
            phase = _finite_param(t.get("phase", 0.0), "phase")
            arg = 2.0 * np.pi * freq * xs + phase
            vals = vals + amp * (np.cos(arg) if fn == "cos" else np.sin(arg))
            label.append(f"{amp}*{fn}(2pi*{freq}x+{phase})")
        return Potential(vals, (a, b), spec="trig(" + "+".join(label) + ")")
    if kind == "table":
        tx = np.asarray(params.get("x", []), dtype=float)
        tq = np.asarray(params.get("q", []))
        if tx.size != tq.size or tx.size < 3:
            raise InputError("table spec needs matching x/q arrays with >= 3 entries")
        want = np.linspace(a, b, tx.size)
        if np.max(np.abs(tx - want)) > _INTERVAL_TOL * max(1.0, abs(b - a)):
            raise InputError("table abscissas must be uniform over the interval")
        if not np.all(np.isfinite(tq)):
            raise InputError("table values must be finite")
        return Potential(tq, (a, b), spec=f"table[{tx.size}]")
    if kind == "bb":
        q2_spec = params.get("q2")
        if q2_spec is None:
            raise InputError("bb spec needs a nested q2 spec")
        q2 = make_potential({**q2_spec, "interval": list(q2_spec.get("interval", [a, b]))}, nodes=m)
        return build_coincidence_potential(q2)
    raise InputError(f"unknown potential spec kind {kind!r}")


def _finite_param(value, name: str) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise InputError(f"parameter {name} must be a number, got {value!r}") from None
    if not np.isfinite(v):
        raise InputError(f"parameter {name} must be finite, got {v!r}")
    return v


def from_callable(fn, nodes: int = DEFAULT_NODES, interval=(0.0, 1.0), label: str = "callable") -> Potential:
    """Sample an arbitrary callable onto the uniform grid."""
    a, b = float(interval[0]), float(interval[1])
    xs = np.linspace(a, b, nodes + 1)
    return Potential(np.asarray(fn(xs)), (a, b), spec=label)


def decompose(p: Potential) -> SymmetryDecomposition:
    """Split a potential on [0, 1] into even and odd parts about x = 1/2."""
    _require_interval(p, (0.0, 1.0), "decompose")
    rev = p.samples[::-1]
    q1 = (p.samples + rev) / 2.0
    q2 = (p.samples - rev) / 2.0
    return SymmetryDecomposition(
        q1=Potential(q1, p.interval, spec=f"even[{p.spec}]"),
        q2=Potential(q2, p.interval, spec=f"odd[{p.spec}]"),
        g=Potential(p.samples - rev, p.interval, spec=f"diff[{p.spec}]"),
    )


def _mirror_defect(p: Potential) -> np.ndarray:
    return p.samples - p.samples[::-1]


def _report(defect: np.ndarray, length: float, dx: float, tol: float) -> ConditionReport:
    sup = float(np.max(np.abs(defect)))
    l2 = float(np.sqrt(np.trapezoid(np.abs(defect) ** 2, dx=dx) / length))
    return ConditionReport(residual_sup=sup, residual_l2=l2, satisfied=sup <= tol, tolerance=tol)


def check_symmetry(p: Potential, tol: float = 1e-6) -> ConditionReport:
    """Residual of q(x) = q(a + b - x) over the potential's interval."""
    if tol <= 0:
        raise InputError("tolerance must be positive")
    defect = _mirror_defect(p)
    return _report(defect, p.length, p.length / p.nodes_count, tol)


def _coincidence_defect(p: Potential) -> np.ndarray:
    """q1 - (int_b^x q2)**2 with q1/q2 the even/odd parts about the midpoint."""
    rev = p.samples[::-1]
    q1 = (p.samples + rev) / 2.0
    q2 = (p.samples - rev) / 2.0
    dx = p.length / p.nodes_count
    running = _cumulative_trapezoid(q2, dx)
    integral_from_b = running - running[-1]
    return q1 - integral_from_b**2


def check_coincidence_condition(p: Potential, tol: float = 1e-6) -> ConditionReport:
    """Check q1(x) = (int_1^x q2)**2 on [0, 1].

    When this holds, the Dirichlet spectrum coincides with the Neumann
    spectrum except for the zero eigenvalue.
    """
    if tol <= 0:
        raise InputError("tolerance must be positive")
    _require_interval(p, (0.0, 1.0), "check_coincidence_condition")
    defect = _coincidence_defect(p)
    return _report(defect, p.length, p.length / p.nodes_count, tol)


def check_half_coincidence_condition(p: Potential, tol: float = 1e-6) -> ConditionReport:
    """Same condition on [0, 1/2]: reflection about 1/4, integral from 1/2."""
    if tol <= 0:
        raise InputError("tolerance must be positive")
    _require_interval(p, (0.0, 0.5), "check_half_coincidence_condition")
    defect = _coincidence_defect(p)
    return _report(defect, p.length, p.length / p.nodes_count, tol)


def build_coincidence_potential(q2) -> Potential:
    """Construct q = (int_b^x q2)**2 + q2 from an odd part q2.

    The decomposition of the result satisfies the square-integral coincidence
    condition up to quadrature error.  ``q2`` may be a Potential or a spec
    mapping; it must be antisymmetric about the interval midpoint.
    """
    q2p = q2 if isinstance(q2, Potential) else make_potential(q2)
    scale = max(1.0, q2p.sup_abs())
    antisym = float(np.max(np.abs(q2p.samples + q2p.samples[::-1])))
    if antisym > 1e-12 * scale:
        raise InputError(
            f"q2 must be antisymmetric about the interval midpoint (defect {antisym:.3e})"
        )
    dx = q2p.length / q2p.nodes_count
    running = _cumulative_trapezoid(q2p.samples, dx)
    integral_from_b = running - running[-1]
    q = integral_from_b**2 + q2p.samples
    return Potential(q, q2p.interval, spec=f"bb[{q2p.spec}]")


def restrict(p: Potential, sub: tuple[float, float]) -> Potential:
    """Restrict to a subinterval whose endpoints land on grid nodes."""
    a, b = p.interval
    lo, hi = float(sub[0]), float(sub[1])
    if not (a - _INTERVAL_TOL <= lo < hi <= b + _INTERVAL_TOL):
        raise InputError(f"subinterval {sub!r} not contained in {p.interval!r}")
    h = p.length / p.nodes_count
    i_lo = round((lo - a) / h)
    i_hi = round((hi - a) / h)
    if abs(a + i_lo * h - lo) > _INTERVAL_TOL or abs(a + i_hi * h - hi) > _INTERVAL_TOL:
        raise InputError(f"subinterval endpoints {sub!r} do not land on grid nodes")
    if i_hi - i_lo < 2:
        raise InputError("restricted potential needs at least 2 subintervals")
    return Potential(p.samples[i_lo : i_hi + 1], (lo, hi), spec=f"{p.spec}|[{lo},{hi}]")
