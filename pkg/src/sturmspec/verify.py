"""Executable spectral-coincidence experiments.

Each verifier pairs a pointwise condition on the potential with a spectral
computation and reports whether the two sides agree:

* ``verify_mixed_coincidence`` (id ``T1``): mirror symmetry of q versus
  coincidence of the DN and ND spectra.
* ``verify_dirichlet_neumann_coincidence`` (id ``T2``): the square-integral
  condition on the even/odd parts of q versus coincidence of the D and N
  spectra away from zero, plus membership of zero in the N spectrum.
* ``verify_periodic_double_structure`` (id ``T5.1``): the half-interval
  square-integral condition versus all periodic eigenvalues above the lowest
  being double, with parity/boundary checks of the double eigenfunctions.
* ``verify_antiperiodic_double_structure`` (id ``T5.2``): q(x) = q(1/2 - x)
  on the half interval versus all anti-periodic eigenvalues being double.
* ``verify_constant_shift`` (id ``R5.4``): for constant q = c the D spectrum
  equals the N spectrum with its lowest point (at c) removed.
* ``verify_identities`` (id ``IDENT``): midpoint product identities for the
  endpoint values of the fundamental pair, the discriminant factorizations,
  and two normalization-translation identities that hold for every q.

Verdicts are ``consistent-forward`` (condition holds and the spectra agree),
``consistent-converse`` (condition fails and the spectra visibly disagree),
or ``inconsistent`` (the two sides contradict each other beyond tolerance).
The converse direction is a spot check on witness potentials, not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericsError
from .potential import (
    Potential,
    check_coincidence_condition,
    check_half_coincidence_condition,
    check_symmetry,
    make_potential,
    restrict,
)
from .shooting import endpoint_scan, midpoint_solutions
from .spectra import EigenvalueList, _solver_steps, eigenvalues

VERDICT_FORWARD = "consistent-forward"
VERDICT_CONVERSE = "consistent-converse"
VERDICT_INCONSISTENT = "inconsistent"

#: eigenvalues this close to zero count as "the zero eigenvalue" when excluded
ZERO_EXCLUSION_SCALE = 1e-6
DEFAULT_GAP_TOL = 1e-5
DEFAULT_CONDITION_TOL = 1e-6
DEFAULT_PARITY_TOL = 1e-6


@dataclass(frozen=True)
class SpectraComparison:
    bc_a: str
    bc_b: str
    pairs: tuple[tuple[float, float, float], ...]  # (mu_a, mu_b, |gap|)
    max_gap: float
    max_rel_gap: float
    count_compared: int
    excluded_a: tuple[float, ...] = ()
    excluded_b: tuple[float, ...] = ()


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    verdict: str
    condition_residual: float
    spectral_gap: float | None
    tolerances: dict
    potential_spec: str
    multiplicity_tally: dict | None = None
    parity_defects: dict | None = None
    details: dict = field(default_factory=dict)


def _zero_tolerance(p: Potential) -> float:
    return ZERO_EXCLUSION_SCALE * (1.0 + p.sup_abs())


def compare_spectra(
    p: Potential,
    bc_a: str,
    bc_b: str,
    count: int,
    exclude_zero: bool = False,
    window_pad: float = 0.0,
) -> SpectraComparison:
    """Pair the first ``count`` eigenvalues of two boundary conditions in
    sorted order (multiplicities expanded) and report the gaps."""
    extra = 2 + (1 if exclude_zero else 0)
    list_a = eigenvalues(p, bc_a, count + extra, window_pad=window_pad)
    list_b = eigenvalues(p, bc_b, count + extra, window_pad=window_pad)
    zero_tol = _zero_tolerance(p)

    def split(lst: EigenvalueList):
        vals = lst.expanded()
        if not exclude_zero:
            return vals, ()
        keep = np.abs(vals) > zero_tol
        return vals[keep], tuple(float(v) for v in vals[~keep])

    vals_a, excl_a = split(list_a)
    vals_b, excl_b = split(list_b)
    n = min(count, vals_a.size, vals_b.size)
    if n < count:
        raise NumericsError(
            f"only {n} eigenvalue pairs available after exclusion (requested {count})"
        )
    pairs = []
    for i in range(n):
        gap = abs(vals_a[i] - vals_b[i])
        pairs.append((float(vals_a[i]), float(vals_b[i]), float(gap)))
    gaps = np.array([g for _, _, g in pairs])
    scales = np.array([1.0 + max(abs(a), abs(b)) for a, b, _ in pairs])
    return SpectraComparison(
        bc_a=bc_a,
        bc_b=bc_b,
        pairs=tuple(pairs),
        max_gap=float(np.max(gaps)),
        max_rel_gap=float(np.max(gaps / scales)),
        count_compared=n,
        excluded_a=excl_a,
        excluded_b=excl_b,
    )


def _two_sided_verdict(condition_ok: bool, spectra_ok: bool) -> str:
    if condition_ok and spectra_ok:
        return VERDICT_FORWARD
    if not condition_ok and not spectra_ok:
        return VERDICT_CONVERSE
    return VERDICT_INCONSISTENT


def verify_mixed_coincidence(
    p: Potential,
    count: int = 8,
    tol: float = DEFAULT_GAP_TOL,
    condition_tol: float = DEFAULT_CONDITION_TOL,
) -> TheoremReport:
    """Mirror symmetry of q versus coincidence of the DN and ND spectra."""
    _require_standard_interval(p)
    cond = check_symmetry(p, tol=condition_tol)
    comp = compare_spectra(p, "DN", "ND", count)
    spectra_ok = comp.max_rel_gap <= tol
    return TheoremReport(
        theorem_id="T1",
        verdict=_two_sided_verdict(cond.satisfied, spectra_ok),
        condition_residual=cond.residual_sup,
        spectral_gap=comp.max_gap,
        tolerances={"gap": tol, "condition": condition_tol},
        potential_spec=p.spec,
        details={"max_rel_gap": comp.max_rel_gap, "pairs": list(comp.pairs)},
    )


def _neumann_zero_membership(p: Potential, steps: int):
    """Distance (in mu units) from zero to the nearest Neumann eigenvalue,
    estimated as |char(0)| / |char'(0)|."""
    delta = 1e-3
    scan = endpoint_scan(p, [-delta, 0.0, delta], steps=steps)
    chi = scan.cp1
    slope = (chi[2] - chi[0]) / (2.0 * delta)
    distance = abs(chi[1]) / max(abs(slope), 1e-30)
    return float(distance), float(chi[1]), float(slope)


def verify_dirichlet_neumann_coincidence(
    p: Potential,
    count: int = 6,
    tol: float = DEFAULT_GAP_TOL,
    condition_tol: float = DEFAULT_CONDITION_TOL,
) -> TheoremReport:
    """Square-integral condition versus D/N coincidence away from zero."""
    _require_standard_interval(p)
    cond = check_coincidence_condition(p, tol=condition_tol)
    comp = compare_spectra(p, "D", "N", count, exclude_zero=True)
    zero_dist, char_at_zero, slope = _neumann_zero_membership(p, _solver_steps(p, None))
    zero_ok = zero_dist <= _zero_tolerance(p)
    spectra_ok = comp.max_rel_gap <= tol and zero_ok
    return TheoremReport(
        theorem_id="T2",
        verdict=_two_sided_verdict(cond.satisfied, spectra_ok),
        condition_residual=cond.residual_sup,
        spectral_gap=comp.max_gap,
        tolerances={"gap": tol, "condition": condition_tol, "zero_membership": _zero_tolerance(p)},
        potential_spec=p.spec,
        details={
            "max_rel_gap": comp.max_rel_gap,
            "zero_membership_distance": zero_dist,
            "neumann_char_at_zero": char_at_zero,
            "neumann_char_slope_at_zero": slope,
            "excluded_d": list(comp.excluded_a),
            "excluded_n": list(comp.excluded_b),
            "pairs": list(comp.pairs),
        },
    )


def _parity_defects(p: Potential, mu: float, mode: str) -> dict:
    """Parity and boundary defects of the midpoint-normalized pair at mu.

    For a symmetric potential y1 is even and y2 odd about the midpoint; at a
    double periodic eigenvalue y1 additionally satisfies Neumann and y2
    Dirichlet conditions at both ends (the anti-periodic case swaps the two
    boundary roles).
    """
    ms = midpoint_solutions(p, mu, steps=_solver_steps(p, None))
    sup = lambda arr: max(float(np.max(np.abs(arr))), 1e-30)
    even = float(np.max(np.abs(ms.y1 - ms.y1[::-1]))) / sup(ms.y1)
    odd = float(np.max(np.abs(ms.y2 + ms.y2[::-1]))) / sup(ms.y2)
    if mode == "P":
        y1_bc = max(abs(ms.y1p[0]), abs(ms.y1p[-1])) / sup(ms.y1p)
        y2_bc = max(abs(ms.y2[0]), abs(ms.y2[-1])) / sup(ms.y2)
    else:
        y1_bc = max(abs(ms.y1[0]), abs(ms.y1[-1])) / sup(ms.y1)
        y2_bc = max(abs(ms.y2p[0]), abs(ms.y2p[-1])) / sup(ms.y2p)
    return {
        "even_defect": even,
        "odd_defect": odd,
        "y1_boundary_defect": float(y1_bc),
        "y2_boundary_defect": float(y2_bc),
    }


def _max_parity_defect(defects: list[dict]) -> float:
    if not defects:
        return 0.0
    return max(max(d.values()) for d in defects)


def _require_standard_interval(p: Potential):
    a, b = p.interval
    if abs(a) > 1e-12 or abs(b - 1.0) > 1e-12:
        raise InputError("verification experiments run on potentials over [0, 1]")


def _require_symmetric(p: Potential) -> None:
    sym = check_symmetry(p, tol=DEFAULT_CONDITION_TOL * (1.0 + p.sup_abs()))
    if not sym.satisfied:
        raise InputError(
            f"potential must be symmetric about 1/2 (residual {sym.residual_sup:.3e})"
        )


def verify_periodic_double_structure(
    p: Potential,
    count: int = 6,
    tol: float = DEFAULT_GAP_TOL,
    condition_tol: float = DEFAULT_CONDITION_TOL,
    parity_tol: float = DEFAULT_PARITY_TOL,
) -> TheoremReport:
    """Half-interval square-integral condition versus an all-double periodic
    spectrum above the lowest eigenvalue (symmetric potentials only)."""
    _require_standard_interval(p)
    _require_symmetric(p)
    cond = check_half_coincidence_condition(restrict(p, (0.0, 0.5)), tol=condition_tol)
    ev = eigenvalues(p, "P", count)
    above = ev.entries[1:]
    tally = {
        "double": sum(1 for e in above if e.multiplicity == 2),
        "simple": sum(1 for e in above if e.multiplicity == 1),
        "lowest_multiplicity": ev.entries[0].multiplicity,
    }
    all_double = tally["simple"] == 0
    parity = [ _parity_defects(p, e.mu, "P") for e in above if e.multiplicity == 2 ]
    parity_max = _max_parity_defect(parity)
    verdict = _two_sided_verdict(cond.satisfied, all_double)
    if verdict == VERDICT_FORWARD and parity_max > parity_tol:
        verdict = VERDICT_INCONSISTENT
    return TheoremReport(
        theorem_id="T5.1",
        verdict=verdict,
        condition_residual=cond.residual_sup,
        spectral_gap=None,
        tolerances={"condition": condition_tol, "parity": parity_tol, "gap": tol},
        potential_spec=p.spec,
        multiplicity_tally=tally,
        parity_defects={"max": parity_max, "per_root": parity},
        details={"eigenvalues": [(e.mu, e.multiplicity) for e in ev.entries]},
    )


def verify_antiperiodic_double_structure(
    p: Potential,
    count: int = 6,
    tol: float = DEFAULT_GAP_TOL,
    condition_tol: float = DEFAULT_CONDITION_TOL,
    parity_tol: float = DEFAULT_PARITY_TOL,
) -> TheoremReport:
    """q(x) = q(1/2 - x) on the half interval versus an all-double
    anti-periodic spectrum (symmetric potentials only)."""
    _require_standard_interval(p)
    _require_symmetric(p)
    half = restrict(p, (0.0, 0.5))
    cond = check_symmetry(half, tol=condition_tol)  # reflection about 1/4
    ev = eigenvalues(p, "AP", count)
    tally = {
        "double": sum(1 for e in ev.entries if e.multiplicity == 2),
        "simple": sum(1 for e in ev.entries if e.multiplicity == 1),
    }
    all_double = tally["simple"] == 0
    parity = [ _parity_defects(p, e.mu, "AP") for e in ev.entries if e.multiplicity == 2 ]
    parity_max = _max_parity_defect(parity)
    verdict = _two_sided_verdict(cond.satisfied, all_double)
    if verdict == VERDICT_FORWARD and parity_max > parity_tol:
        verdict = VERDICT_INCONSISTENT
    return TheoremReport(
        theorem_id="T5.2",
        verdict=verdict,
        condition_residual=cond.residual_sup,
        spectral_gap=None,
        tolerances={"condition": condition_tol, "parity": parity_tol, "gap": tol},
        potential_spec=p.spec,
        multiplicity_tally=tally,
        parity_defects={"max": parity_max, "per_root": parity},
        details={"eigenvalues": [(e.mu, e.multiplicity) for e in ev.entries]},
    )


def verify_constant_shift(
    c: float,
    count: int = 6,
    tol: float = 1e-7,
    nodes: int = 64,
) -> TheoremReport:
    """For q = c the Dirichlet spectrum equals the Neumann spectrum minus its
    lowest point, which sits exactly at c."""
    if not np.isfinite(c):
        raise InputError("constant potential value must be finite")
    p = make_potential({"kind": "const", "params": {"c": float(c)}}, nodes=nodes)
    d_list = eigenvalues(p, "D", count)
    n_list = eigenvalues(p, "N", count + 1)
    d_vals, n_vals = d_list.mus(), n_list.mus()
    lowest_residual = abs(n_vals[0] - c)
    gaps = np.abs(d_vals - n_vals[1:])
    scales = 1.0 + np.abs(d_vals)
    ok = lowest_residual <= tol * (1.0 + abs(c)) and np.all(gaps <= tol * scales)
    return TheoremReport(
        theorem_id="R5.4",
        verdict=VERDICT_FORWARD if ok else VERDICT_INCONSISTENT,
        condition_residual=float(lowest_residual),
        spectral_gap=float(np.max(gaps)),
        tolerances={"gap": tol},
        potential_spec=p.spec,
        details={
            "dirichlet": [float(v) for v in d_vals],
            "neumann": [float(v) for v in n_vals],
        },
    )


DEFAULT_MU_SAMPLES = (0.0, 1.0, np.pi**2, 10.0, 4 * np.pi**2, 50.0, 9 * np.pi**2, 100.0)


def verify_identities(p: Potential, mu_samples=DEFAULT_MU_SAMPLES, steps: int | None = None):
    """Residuals of the midpoint product identities at sampled mu values.

    Rows carry, per mu: the DN/ND coincidence identity ``a``; the midpoint
    product identities ``b``..``e2``; the discriminant factorizations
    ``disc_periodic``/``disc_antiperiodic`` (all of which require a symmetric
    potential to vanish); and two translation identities
    ``translation_mixed``/``translation_dn`` relating the endpoint-normalized
    and midpoint-normalized solution pairs, which hold for every potential
    and serve as an integrator self-check.

    Complex-valued potentials are evaluated at real mu samples; residuals are
    modulus values.  Eigenvalue search stays real-only, but the identities
    themselves carry over verbatim to complex q.
    """
    mus = np.asarray(list(mu_samples), dtype=float)
    scan = endpoint_scan(p, mus, steps=_solver_steps(p, steps))
    c1, cp1, s1, sp1 = scan.c1, scan.cp1, scan.s1, scan.sp1
    ch, cph, sh, sph = scan.c_half, scan.cp_half, scan.s_half, scan.sp_half

    # midpoint-normalized values at both endpoints, by the exact linear maps
    y1_0, y2_0, y1p_0, y2p_0 = sph, -sh, -cph, ch
    y1_1 = sph * c1 - cph * s1
    y2_1 = ch * s1 - sh * c1
    y1p_1 = sph * cp1 - cph * sp1
    y2p_1 = ch * sp1 - sh * cp1

    delta = c1 + sp1
    shared = 1.0 + 2.0 * sh * cph
    shared_alt = 2.0 * ch * sph - 1.0
    t_mixed = (y1_0 * y2p_1 - y1p_1 * y2_0) - (y2p_0 * y1_1 - y1p_0 * y2_1)
    t_dn = (y2p_0 * y1p_1 - y1p_0 * y2p_1) + mus * (y1_0 * y2_1 - y2_0 * y1_1)

    rows = []
    for i, mu in enumerate(mus):
        rows.append(
            {
                "mu": float(mu),
                "a": float(abs(sp1[i] - c1[i])),
                "b": float(abs(s1[i] - 2.0 * sh[i] * sph[i])),
                "c": float(abs(cp1[i] - 2.0 * ch[i] * cph[i])),
                "d1": float(abs(c1[i] - shared[i])),
                "d2": float(abs(c1[i] - shared_alt[i])),
                "e1": float(abs(sp1[i] - shared[i])),
                "e2": float(abs(sp1[i] - shared_alt[i])),
                "disc_periodic": float(abs(delta[i] - 2.0 - 4.0 * sh[i] * cph[i])),
                "disc_antiperiodic": float(abs(delta[i] + 2.0 - 4.0 * ch[i] * sph[i])),
                "translation_mixed": float(abs(t_mixed[i] - (sp1[i] - c1[i]))),
                "translation_dn": float(abs(t_dn[i] - (cp1[i] + mu * s1[i]))),
            }
        )
    return rows


_SYMMETRY_KEYS = ("a", "b", "c", "d1", "d2", "e1", "e2", "disc_periodic", "disc_antiperiodic")
_TRANSLATION_KEYS = ("translation_mixed", "translation_dn")


def verify_identity_suite(
    p: Potential,
    mu_samples=DEFAULT_MU_SAMPLES,
    tol: float = 1e-7,
) -> TheoremReport:
    """Report-shaped wrapper around ``verify_identities``.

    For a symmetric potential every identity must hold; for an asymmetric one
    only the translation identities must, and a visible violation of the
    coincidence identity counts as converse evidence.
    """
    _require_standard_interval(p)
    rows = verify_identities(p, mu_samples)
    sym = check_symmetry(p, tol=DEFAULT_CONDITION_TOL * (1.0 + p.sup_abs()))
    max_sym = max(r[k] for r in rows for k in _SYMMETRY_KEYS)
    max_translation = max(r[k] for r in rows for k in _TRANSLATION_KEYS)
    translation_ok = max_translation <= 1e-8 * (1.0 + float(np.max(np.abs(mu_samples))))
    if sym.satisfied:
        verdict = VERDICT_FORWARD if (max_sym <= tol and translation_ok) else VERDICT_INCONSISTENT
    else:
        converse_seen = max(r["a"] for r in rows) > tol
        verdict = VERDICT_CONVERSE if (converse_seen and translation_ok) else VERDICT_INCONSISTENT
    return TheoremReport(
        theorem_id="IDENT",
        verdict=verdict,
        condition_residual=sym.residual_sup,
        spectral_gap=max_sym,
        tolerances={"identity": tol},
        potential_spec=p.spec,
        details={"rows": rows, "max_translation_residual": max_translation},
    )
