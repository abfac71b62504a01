"""Eigenvalue location for six boundary-value problems.

Boundary conditions and their characteristic functions (zeros in the
spectral parameter ``mu`` are the operator eigenvalues):

====  ============================  =========================
kind  boundary conditions           characteristic function
====  ============================  =========================
D     y(a) = y(b) = 0               s(b, mu)
N     y'(a) = y'(b) = 0             c'(b, mu)
DN    y(a) = y'(b) = 0              s'(b, mu)
ND    y'(a) = y(b) = 0              c(b, mu)
P     y(a) = y(b), y'(a) = y'(b)    Delta(mu) - 2
AP    y(a) = -y(b), y'(a) = -y'(b)  Delta(mu) + 2
====  ============================  =========================

with the Floquet discriminant Delta = c(b) + s'(b).  Roots are bracketed on
a scan grid whose spacing grows like sqrt(mu) (consecutive roots of these
entire functions spread like (n pi)^2) and are then narrowed by batched
interval subdivision; every subdivision round costs one integrator sweep
shared by all open brackets.

Periodic/anti-periodic eigenvalues of multiplicity two are tangencies of the
discriminant, not sign changes.  For mirror-symmetric potentials the
discriminant factors through midpoint values,

    Delta - 2 = 4 s(h) c'(h),      Delta + 2 = 4 c(h) s'(h),   h = midpoint,

and each factor has only simple, well-conditioned zeros; the solver uses the
factored form whenever the potential is symmetric and falls back to
extremum-refined tangency detection on the discriminant otherwise.

``fd_oracle_eigenvalues`` provides an independent second-order finite
difference route to the same spectra for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import InputError, NumericsError
from .potential import Potential, check_symmetry
from .shooting import EndpointScan, default_steps, endpoint_scan

BC_KINDS = ("D", "N", "DN", "ND", "P", "AP")

#: bisection stops when the bracket width drops below this times (1 + |mu|)
ROOT_WIDTH_TOL = 1e-10
#: two located roots closer than this times (1 + |mu|) are the same root
ROOT_MERGE_TOL = 1e-8
#: factor roots of the periodic problem closer than this times (1 + |mu|)
#: form one eigenvalue of multiplicity two
DOUBLE_MATCH_TOL = 1e-7
#: monodromy test: both |s(b)| and |c'(b)| below this times (1 + |mu|)
MULTIPLICITY_TOL = 1e-6
_MIN_STEPS = 2000
_SUBDIV = 64


def _require_bc(bc: str):
    if bc not in BC_KINDS:
        raise InputError(f"unknown boundary condition {bc!r}; expected one of {BC_KINDS}")


def _require_real(p: Potential, what: str):
    if p.is_complex:
        raise InputError(f"{what} requires a real-valued potential")


def _solver_steps(p: Potential, steps: int | None) -> int:
    if steps is not None:
        return steps + steps % 2
    return max(default_steps(p), _MIN_STEPS)


@dataclass(frozen=True)
class EigenEntry:
    mu: float
    multiplicity: int
    char_residual: float | None


@dataclass(frozen=True)
class EigenvalueList:
    bc: str
    entries: tuple[EigenEntry, ...]
    count_requested: int

    def mus(self) -> np.ndarray:
        return np.array([e.mu for e in self.entries])

    def expanded(self) -> np.ndarray:
        """Eigenvalues repeated according to multiplicity."""
        return np.array([e.mu for e in self.entries for _ in range(e.multiplicity)])


@dataclass(frozen=True)
class ClassifiedRoot:
    mu: float
    case: str
    factor_a: float
    factor_b: float


@dataclass(frozen=True)
class PeriodicClassification:
    """Case tags for periodic/anti-periodic roots of a symmetric potential.

    For P the factors are (s(h), c'(h)) and the tags are ``s-only``,
    ``cprime-only``, ``double``; for AP the factors are (c(h), s'(h)) and
    the tags are ``c-only``, ``sprime-only``, ``double``.
    """

    bc: str
    roots: tuple[ClassifiedRoot, ...]


def _char_from_scan(scan: EndpointScan, bc: str) -> np.ndarray:
    if bc == "D":
        return scan.s1
    if bc == "N":
        return scan.cp1
    if bc == "DN":
        return scan.sp1
    if bc == "ND":
        return scan.c1
    if bc == "P":
        return scan.c1 + scan.sp1 - 2.0
    return scan.c1 + scan.sp1 + 2.0  # AP


def char_value(p: Potential, bc: str, mu, steps: int | None = None):
    """Characteristic function of the boundary condition at mu (scalar or array)."""
    _require_bc(bc)
    _require_real(p, "char_value")
    scalar = np.isscalar(mu)
    scan = endpoint_scan(p, np.atleast_1d(mu), steps=_solver_steps(p, steps))
    vals = _char_from_scan(scan, bc)
    return float(vals[0]) if scalar else vals


def hill_discriminant(p: Potential, mu, steps: int | None = None):
    """Floquet discriminant Delta(mu) = c(b, mu) + s'(b, mu)."""
    _require_real(p, "hill_discriminant")
    scalar = np.isscalar(mu)
    scan = endpoint_scan(p, np.atleast_1d(mu), steps=_solver_steps(p, steps))
    vals = scan.c1 + scan.sp1
    return float(vals[0]) if scalar else vals


def _scan_points(lo: float, hi: float, length: float) -> np.ndarray:
    """mu grid whose spacing grows like sqrt(mu), constant below mu ~ 10/L^2."""
    base = np.pi**2 / 8.0 / length**2
    pts = [lo]
    mu = lo
    while mu < hi:
        nu = max(mu, 0.0) * length**2
        mu += base * max(1.0, np.sqrt(nu / 10.0))
        pts.append(min(mu, hi))
    return np.array(pts)


def _width_tol(lo, hi):
    return ROOT_WIDTH_TOL * (1.0 + np.maximum(np.abs(lo), np.abs(hi)))


class _Bracket:
    __slots__ = ("lo", "hi", "flo", "fhi", "row")

    def __init__(self, lo, hi, flo, fhi, row=0):
        self.lo, self.hi, self.flo, self.fhi, self.row = lo, hi, flo, fhi, row


def _refine_sign_roots(feval, brackets: list[_Bracket]) -> np.ndarray:
    """Narrow sign-change brackets by repeated subdivision.

    ``feval(mus)`` returns a (rows, len(mus)) array; each bracket reads the
    row it was created from, so brackets of several characteristic functions
    refine together on shared integrator sweeps.
    """
    if not brackets:
        return np.array([])
    frac = np.arange(1, _SUBDIV) / _SUBDIV
    for _ in range(40):
        open_ = [b for b in brackets if (b.hi - b.lo) > _width_tol(b.lo, b.hi)]
        if not open_:
            break
        pts = np.concatenate([b.lo + (b.hi - b.lo) * frac for b in open_])
        fall = feval(pts)
        for k, b in enumerate(open_):
            sl = slice(k * (_SUBDIV - 1), (k + 1) * (_SUBDIV - 1))
            xs = np.concatenate(([b.lo], pts[sl], [b.hi]))
            fs = np.concatenate(([b.flo], fall[b.row, sl], [b.fhi]))
            zero_hits = np.nonzero(fs == 0.0)[0]
            if zero_hits.size:
                j = zero_hits[0]
                b.lo = b.hi = xs[j]
                b.flo = b.fhi = 0.0
                continue
            j = np.nonzero(fs[:-1] * fs[1:] < 0.0)[0][0]
            b.lo, b.hi = xs[j], xs[j + 1]
            b.flo, b.fhi = fs[j], fs[j + 1]
    return np.array([0.5 * (b.lo + b.hi) for b in brackets])


def _refine_extrema(feval, cells, maximize: bool):
    """Locate the extremum of row-0 of feval inside each (lo, hi) cell."""
    if not cells:
        return np.array([]), np.array([])
    lo = np.array([c[0] for c in cells])
    hi = np.array([c[1] for c in cells])
    frac = np.arange(_SUBDIV + 1) / _SUBDIV
    best_x = 0.5 * (lo + hi)
    best_f = np.zeros_like(best_x)
    for _ in range(8):
        pts = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
        fvals = feval(pts.ravel())[0].reshape(pts.shape)
        pick = np.argmax(fvals, axis=1) if maximize else np.argmin(fvals, axis=1)
        rows = np.arange(len(cells))
        best_x = pts[rows, pick]
        best_f = fvals[rows, pick]
        lo = pts[rows, np.maximum(pick - 1, 0)]
        hi = pts[rows, np.minimum(pick + 1, _SUBDIV)]
    return best_x, best_f


def _dedupe(roots: np.ndarray) -> np.ndarray:
    if roots.size == 0:
        return roots
    roots = np.sort(roots)
    keep = [roots[0]]
    for r in roots[1:]:
        if r - keep[-1] > ROOT_MERGE_TOL * (1.0 + abs(r)):
            keep.append(r)
    return np.array(keep)


def _scan_window(p: Potential, bc: str, count: int, pad: float):
    length = p.length
    lo = p.min_real() - 1.0 - pad
    if bc in ("P", "AP"):
        hi = 4.0 * np.pi**2 * (count + 1) ** 2 / length**2 + p.sup_abs() + pad
    else:
        hi = np.pi**2 * (count + 2) ** 2 / length**2 + p.sup_abs() + pad
    return lo, hi


def _tangency_tol(mu: float, h: float, sup_q: float) -> float:
    """Discriminant values below this are indistinguishable from zero.

    Scales with the 4th-order integrator error model h^4 (mu + q)^2 so that
    genuinely open spectral gaps wider than the resolution limit are never
    misread as tangencies.
    """
    return max(1e-13 * (1.0 + abs(mu)), h**4 * (1.0 + abs(mu) + sup_q) ** 2)


def _sign_change_brackets(mus, fvals, row=0) -> list[_Bracket]:
    brackets = []
    for i in range(mus.size - 1):
        if fvals[i] == 0.0:
            brackets.append(_Bracket(mus[i], mus[i], 0.0, 0.0, row))
        elif fvals[i] * fvals[i + 1] < 0.0:
            brackets.append(_Bracket(mus[i], mus[i + 1], fvals[i], fvals[i + 1], row))
    if mus.size and fvals[-1] == 0.0:
        brackets.append(_Bracket(mus[-1], mus[-1], 0.0, 0.0, row))
    return brackets


def _locate_roots_rows(feval, n_rows, lo, hi, length):
    """Roots of each row of a multi-row characteristic evaluator."""
    mus = _scan_points(lo, hi, length)
    fall = feval(mus)
    brackets = []
    for row in range(n_rows):
        brackets.extend(_sign_change_brackets(mus, fall[row], row))
    roots = _refine_sign_roots(feval, brackets)
    out = []
    for row in range(n_rows):
        mask = np.array([b.row == row for b in brackets], dtype=bool)
        out.append(_dedupe(roots[mask]) if roots.size else np.array([]))
    return out


def _locate_discriminant_roots(p, bc, feval, lo, hi, steps):
    """P/AP root location on the raw discriminant: crossings plus tangencies."""
    mus = _scan_points(lo, hi, p.length)
    fvals = feval(mus)[0]
    brackets = _sign_change_brackets(mus, fvals)
    h = p.length / steps
    sup_q = p.sup_abs()

    # Dips of the discriminant toward zero that never cross: candidate
    # double eigenvalues (closed gaps) or unresolved pairs (open gaps).
    want_max = bc == "P"  # Delta - 2 touches zero from below, Delta + 2 from above
    cells = []
    for i in range(1, mus.size - 1):
        trio = fvals[i - 1 : i + 2]
        if abs(fvals[i]) > 1.0:
            continue
        if want_max and np.all(trio < 0.0) and fvals[i] >= trio[0] and fvals[i] >= trio[2]:
            cells.append((mus[i - 1], mus[i + 1], fvals[i - 1], fvals[i + 1]))
        elif (not want_max) and np.all(trio > 0.0) and fvals[i] <= trio[0] and fvals[i] <= trio[2]:
            cells.append((mus[i - 1], mus[i + 1], fvals[i - 1], fvals[i + 1]))
    ext_x, ext_f = _refine_extrema(feval, [(c[0], c[1]) for c in cells], maximize=want_max)

    tangent_roots = []
    extra = []
    for (cell_lo, cell_hi, f_lo, f_hi), x_star, f_star in zip(cells, ext_x, ext_f):
        overshoot = f_star if want_max else -f_star
        tol = _tangency_tol(x_star, h, sup_q)
        if overshoot > tol:
            # the extremum crosses zero: an open gap with two simple roots
            extra.append(_Bracket(cell_lo, x_star, f_lo, f_star))
            extra.append(_Bracket(x_star, cell_hi, f_star, f_hi))
        elif overshoot >= -tol:
            tangent_roots.append(x_star)
    roots = np.concatenate([_refine_sign_roots(feval, brackets + extra), np.array(tangent_roots)])
    return _dedupe(roots)


def _is_symmetric_enough(p: Potential) -> bool:
    return check_symmetry(p, tol=1e-10 * (1.0 + p.sup_abs())).satisfied


def _factor_extractors(bc: str):
    if bc == "P":
        return (lambda s: s.s_half, lambda s: s.cp_half)
    return (lambda s: s.c_half, lambda s: s.sp_half)


def eigenvalues(
    p: Potential,
    bc: str,
    count: int,
    window_pad: float = 0.0,
    steps: int | None = None,
) -> EigenvalueList:
    """First ``count`` eigenvalues (sorted, with multiplicities) of one
    boundary condition.

    The scan window starts at min(q) - 1 - window_pad and extends far enough
    to hold ``count`` roots of the characteristic function with margin; a
    NumericsError reports the window if fewer roots are found.  Multiplicity
    two can occur only for P/AP.
    """
    _require_bc(bc)
    _require_real(p, "eigenvalue search")
    if count < 1:
        raise InputError("count must be >= 1")
    steps = _solver_steps(p, steps)
    lo, hi = _scan_window(p, bc, count, window_pad)

    def char_eval(mus):
        return _char_from_scan(endpoint_scan(p, mus, steps=steps), bc)[None, :]

    if bc in ("P", "AP") and _is_symmetric_enough(p):
        entries = _periodic_entries_factored(p, bc, lo, hi, steps)
    elif bc in ("P", "AP"):
        roots = _locate_discriminant_roots(p, bc, char_eval, lo, hi, steps)
        entries = _periodic_entries_monodromy(p, bc, roots, steps)
    else:
        roots = _locate_roots_rows(char_eval, 1, lo, hi, p.length)[0]
        resid = np.abs(char_eval(roots)[0]) if roots.size else np.array([])
        entries = [EigenEntry(float(r), 1, float(e)) for r, e in zip(roots, resid)]

    if len(entries) < count:
        raise NumericsError(
            f"found {len(entries)} {bc} eigenvalues in window [{lo:g}, {hi:g}], "
            f"requested {count}; widen window_pad"
        )
    return EigenvalueList(bc=bc, entries=tuple(entries[:count]), count_requested=count)


def _periodic_entries_factored(p, bc, lo, hi, steps):
    """P/AP eigenvalues of a symmetric potential via midpoint factors.

    Roots of the two factors refine together on shared sweeps; a root common
    to both factors is one eigenvalue of multiplicity two.
    """
    ex_a, ex_b = _factor_extractors(bc)

    def factor_eval(mus):
        scan = endpoint_scan(p, mus, steps=steps)
        return np.stack([ex_a(scan), ex_b(scan)])

    roots_a, roots_b = _locate_roots_rows(factor_eval, 2, lo, hi, p.length)

    entries = []
    ia = ib = 0
    while ia < roots_a.size or ib < roots_b.size:
        if ia < roots_a.size and ib < roots_b.size:
            ra, rb = roots_a[ia], roots_b[ib]
            if abs(ra - rb) <= DOUBLE_MATCH_TOL * (1.0 + abs(ra)):
                entries.append((0.5 * (ra + rb), 2))
                ia += 1
                ib += 1
                continue
            if ra < rb:
                entries.append((ra, 1))
                ia += 1
            else:
                entries.append((rb, 1))
                ib += 1
        elif ia < roots_a.size:
            entries.append((roots_a[ia], 1))
            ia += 1
        else:
            entries.append((roots_b[ib], 1))
            ib += 1
    if not entries:
        return []
    mus = np.array([m for m, _ in entries])
    scan = endpoint_scan(p, mus, steps=steps)
    resid = np.abs(_char_from_scan(scan, bc))
    return [
        EigenEntry(float(m), mult, float(r))
        for (m, mult), r in zip(entries, resid)
    ]


def _periodic_entries_monodromy(p, bc, roots, steps):
    if roots.size == 0:
        return []
    scan = endpoint_scan(p, roots, steps=steps)
    resid = np.abs(_char_from_scan(scan, bc))
    tol = MULTIPLICITY_TOL * (1.0 + np.abs(roots))
    double = (np.abs(scan.s1) <= tol) & (np.abs(scan.cp1) <= tol)
    return [
        EigenEntry(float(m), 2 if d else 1, float(r))
        for m, d, r in zip(roots, double, resid)
    ]


def multiplicity(p: Potential, mu: float, bc: str, steps: int | None = None) -> int:
    """Multiplicity of a located P/AP eigenvalue via the monodromy matrix.

    The eigenvalue is double exactly when the monodromy is plus or minus the
    identity, i.e. both s(b, mu) and c'(b, mu) vanish.
    """
    if bc not in ("P", "AP"):
        raise InputError("multiplicity is defined for P and AP only")
    _require_real(p, "multiplicity")
    steps = _solver_steps(p, steps)
    scan = endpoint_scan(p, [mu], steps=steps)
    char = float(np.abs(_char_from_scan(scan, bc)[0]))
    if char > 1e-5 * (1.0 + abs(mu)):
        raise InputError(
            f"mu={mu:g} is not a {bc} eigenvalue (characteristic residual {char:.3e})"
        )
    tol = MULTIPLICITY_TOL * (1.0 + abs(mu))
    if abs(scan.s1[0]) <= tol and abs(scan.cp1[0]) <= tol:
        return 2
    return 1


def classify_periodic_roots(p: Potential, count: int, bc: str) -> PeriodicClassification:
    """Tag each P/AP root of a symmetric potential by which midpoint factor
    vanishes there."""
    if bc not in ("P", "AP"):
        raise InputError("classification is defined for P and AP only")
    sym = check_symmetry(p, tol=1e-6 * (1.0 + p.sup_abs()))
    if not sym.satisfied:
        raise InputError(
            f"potential is not symmetric (residual {sym.residual_sup:.3e}); "
            "the factorization of the discriminant does not apply"
        )
    ev = eigenvalues(p, bc, count)
    steps = _solver_steps(p, None)
    mus = ev.mus()
    scan = endpoint_scan(p, mus, steps=steps)
    ex_a, ex_b = _factor_extractors(bc)
    fa, fb = ex_a(scan), ex_b(scan)
    # normalize out the natural magnitude scales before thresholding:
    # s(h) ~ 1/sqrt(mu) and c'(h) ~ sqrt(mu) for large mu
    root_scale = np.maximum(1.0, np.sqrt(np.abs(mus)))
    if bc == "P":
        norm_a, norm_b = np.abs(fa) * root_scale, np.abs(fb) / root_scale
        names = ("s-only", "cprime-only")
    else:
        norm_a, norm_b = np.abs(fa), np.abs(fb)
        names = ("c-only", "sprime-only")
    tol = MULTIPLICITY_TOL * (1.0 + np.abs(mus))
    roots = []
    for i, entry in enumerate(ev.entries):
        a_zero, b_zero = norm_a[i] <= tol[i], norm_b[i] <= tol[i]
        if a_zero and b_zero:
            case = "double"
        elif a_zero:
            case = names[0]
        elif b_zero:
            case = names[1]
        else:
            case = names[0] if norm_a[i] <= norm_b[i] else names[1]
        roots.append(ClassifiedRoot(entry.mu, case, float(fa[i]), float(fb[i])))
    return PeriodicClassification(bc=bc, roots=tuple(roots))


def _fd_matrix_tridiagonal(p: Potential, bc: str, dim: int):
    """Diagonal and off-diagonal of the symmetrized FD matrix for D/N/DN/ND."""
    a, b = p.interval
    h = p.length / (dim + 1)
    xs = np.linspace(a, b, dim + 2)
    q = p(xs).real
    inv_h2 = 1.0 / h**2
    if bc == "D":
        d = 2.0 * inv_h2 + q[1:-1]
        e = np.full(dim - 1, -inv_h2)
    elif bc == "N":
        d = 2.0 * inv_h2 + q
        e = np.full(dim + 1, -inv_h2)
        e[0] = e[-1] = -np.sqrt(2.0) * inv_h2
    elif bc == "DN":
        d = 2.0 * inv_h2 + q[1:]
        e = np.full(dim, -inv_h2)
        e[-1] = -np.sqrt(2.0) * inv_h2
    else:  # ND
        d = 2.0 * inv_h2 + q[:-1]
        e = np.full(dim, -inv_h2)
        e[0] = -np.sqrt(2.0) * inv_h2
    return d, e, h


def _fd_matrix_wraparound(p: Potential, bc: str, dim: int):
    """Sparse FD matrix for P/AP: tridiagonal plus signed corner entries."""
    a, b = p.interval
    h = p.length / (dim + 1)
    xs = np.linspace(a, b, dim + 2)
    q = p(xs).real
    n = dim + 1
    inv_h2 = 1.0 / h**2
    diag = 2.0 * inv_h2 + q[:-1]
    diag[0] = 2.0 * inv_h2 + 0.5 * (q[0] + q[-1])  # seam row sees both endpoint values
    off = np.full(n - 1, -inv_h2)
    corner = -inv_h2 if bc == "P" else inv_h2
    mat = scipy.sparse.diags([off, diag, off], offsets=[-1, 0, 1], format="lil")
    mat[0, n - 1] += corner
    mat[n - 1, 0] += corner
    return mat.tocsc(), h


def fd_oracle_eigenvalues(p: Potential, bc: str, dim: int, count: int) -> EigenvalueList:
    """Independent eigenvalues from a second-order finite-difference matrix.

    ``dim`` counts interior grid nodes, so the mesh width is h = L/(dim+1)
    for every boundary condition.  Near-degenerate P/AP pairs are merged
    into multiplicity-two entries when they are closer than the
    discretization can split a true double.
    """
    _require_bc(bc)
    _require_real(p, "fd_oracle_eigenvalues")
    if dim < 50:
        raise InputError("dim must be >= 50")
    if dim < 10 * count:
        raise InputError(f"dim={dim} too small for count={count}; need dim >= 10*count")

    if bc in ("P", "AP"):
        mat, h = _fd_matrix_wraparound(p, bc, dim)
        k = min(2 * count + 4, mat.shape[0] - 2)
        sigma = p.min_real() - 2.0
        v0 = np.full(mat.shape[0], 1.0 / np.sqrt(mat.shape[0]))
        vals = scipy.sparse.linalg.eigsh(
            mat, k=k, sigma=sigma, which="LM", v0=v0, return_eigenvectors=False
        )
        vals = np.sort(vals)
        entries = []
        i = 0
        while i < vals.size:
            if i + 1 < vals.size:
                mid = 0.5 * (vals[i] + vals[i + 1])
                if vals[i + 1] - vals[i] <= max(1e-10, 20.0 * h**2 * (1.0 + abs(mid))):
                    entries.append(EigenEntry(float(mid), 2, None))
                    i += 2
                    continue
            entries.append(EigenEntry(float(vals[i]), 1, None))
            i += 1
    else:
        d, e, h = _fd_matrix_tridiagonal(p, bc, dim)
        k = min(count, d.size)
        vals = scipy.linalg.eigh_tridiagonal(
            d, e, eigvals_only=True, select="i", select_range=(0, k - 1)
        )
        entries = [EigenEntry(float(v), 1, None) for v in vals]

    if len(entries) < count:
        raise NumericsError(f"finite-difference oracle produced {len(entries)} < {count} entries")
    return EigenvalueList(bc=bc, entries=tuple(entries[:count]), count_requested=count)
