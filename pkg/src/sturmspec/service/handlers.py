"""Transport-free command handlers.

Each handler maps one validated request model to its response model.  The
FastAPI endpoints and the in-process CLI path both call these, so local and
remote runs produce identical payloads.
"""

from __future__ import annotations

import numpy as np

from .. import goursat, shooting, spectra, verify
from ..errors import InputError
from ..potential import Potential
from . import schemas as sm


def _eigen_models(entries) -> list[sm.EigenvalueModel]:
    return [
        sm.EigenvalueModel(mu=e.mu, mult=e.multiplicity, residual=e.char_residual)
        for e in entries
    ]


def handle_spectrum(cfg: sm.SpectrumConfig) -> sm.SpectrumResponse:
    p = cfg.potential.build()
    ev = spectra.eigenvalues(p, cfg.bc, cfg.count, window_pad=cfg.window_pad, steps=cfg.steps)
    scan = None
    if cfg.scan is not None:
        mus = np.linspace(cfg.scan.lo, cfg.scan.hi, cfg.scan.points)
        vals = spectra.char_value(p, cfg.bc, mus, steps=cfg.steps)
        scan = sm.ScanDataModel(
            label=cfg.bc, mu=[float(m) for m in mus], value=[float(v) for v in vals]
        )
    return sm.SpectrumResponse(
        bc=ev.bc,
        count_requested=ev.count_requested,
        eigenvalues=_eigen_models(ev.entries),
        scan=scan,
    )


def handle_compare(cfg: sm.CompareConfig) -> sm.CompareResponse:
    p = cfg.potential.build()
    comp = verify.compare_spectra(
        p, cfg.bc_a, cfg.bc_b, cfg.count, exclude_zero=cfg.exclude_zero, window_pad=cfg.window_pad
    )
    return sm.CompareResponse(
        bc_a=comp.bc_a,
        bc_b=comp.bc_b,
        pairs=[sm.PairModel(mu_a=a, mu_b=b, gap=g) for a, b, g in comp.pairs],
        max_gap=comp.max_gap,
        max_rel_gap=comp.max_rel_gap,
        count_compared=comp.count_compared,
        excluded_a=list(comp.excluded_a),
        excluded_b=list(comp.excluded_b),
    )


def _verify_dispatch(cfg: sm.VerifyConfig, p: Potential) -> verify.TheoremReport:
    tol = cfg.tolerances
    if cfg.theorem == "T1":
        return verify.verify_mixed_coincidence(
            p,
            count=cfg.count,
            tol=tol.get("gap", verify.DEFAULT_GAP_TOL),
            condition_tol=tol.get("condition", verify.DEFAULT_CONDITION_TOL),
        )
    if cfg.theorem == "T2":
        return verify.verify_dirichlet_neumann_coincidence(
            p,
            count=cfg.count,
            tol=tol.get("gap", verify.DEFAULT_GAP_TOL),
            condition_tol=tol.get("condition", verify.DEFAULT_CONDITION_TOL),
        )
    if cfg.theorem == "T5.1":
        return verify.verify_periodic_double_structure(
            p,
            count=cfg.count,
            tol=tol.get("gap", verify.DEFAULT_GAP_TOL),
            condition_tol=tol.get("condition", verify.DEFAULT_CONDITION_TOL),
            parity_tol=tol.get("parity", verify.DEFAULT_PARITY_TOL),
        )
    if cfg.theorem == "T5.2":
        return verify.verify_antiperiodic_double_structure(
            p,
            count=cfg.count,
            tol=tol.get("gap", verify.DEFAULT_GAP_TOL),
            condition_tol=tol.get("condition", verify.DEFAULT_CONDITION_TOL),
            parity_tol=tol.get("parity", verify.DEFAULT_PARITY_TOL),
        )
    if cfg.theorem == "R5.4":
        if cfg.potential.kind != "const":
            raise InputError("experiment R5.4 requires a constant potential spec")
        return verify.verify_constant_shift(
            float(cfg.potential.params.get("c", 0.0)),
            count=cfg.count,
            tol=tol.get("gap", 1e-7),
        )
    samples = cfg.mu_samples if cfg.mu_samples is not None else verify.DEFAULT_MU_SAMPLES
    return verify.verify_identity_suite(p, samples, tol=tol.get("identity", 1e-7))


def handle_verify(cfg: sm.VerifyConfig) -> sm.TheoremReportModel:
    p = cfg.potential.build()
    report = _verify_dispatch(cfg, p)
    return sm.TheoremReportModel(
        theorem_id=report.theorem_id,
        verdict=report.verdict,
        condition_residual=report.condition_residual,
        spectral_gap=report.spectral_gap,
        tolerances=report.tolerances,
        potential_spec=report.potential_spec,
        multiplicity_tally=report.multiplicity_tally,
        parity_defects=report.parity_defects,
        details=report.details,
    )


def handle_kernel(cfg: sm.KernelConfig) -> sm.KernelResponse:
    p = cfg.potential.build()
    kernel = goursat.solve_kernel(p, lattice=cfg.lattice)
    # residual of the diagonal boundary data against the running integral of q
    diag = kernel.diagonal()
    xs = np.linspace(0.0, 1.0, kernel.lattice + 1)
    h = 1.0 / kernel.lattice
    qv = p(xs)
    expected = np.concatenate(([0.0], 0.5 * np.cumsum((qv[1:] + qv[:-1]) * 0.5 * h)))
    diag_residual = float(np.max(np.abs(diag - expected)))
    values = None
    if cfg.include_values:
        values = []
        for k in range(kernel.lattice + 1):
            t, kv = kernel.slice_at(k)
            x = k / kernel.lattice
            values.extend((x, float(ti), float(np.real(vi))) for ti, vi in zip(t, kv))
    return sm.KernelResponse(
        lattice=kernel.lattice,
        iterations=kernel.iteration_count,
        final_update_norm=kernel.final_update_norm,
        sup_abs=kernel.sup_abs(),
        diagonal_boundary_residual=diag_residual,
        values=values,
    )


def handle_oracle(cfg: sm.OracleConfig) -> sm.OracleResponse:
    p = cfg.potential.build()
    shoot = spectra.eigenvalues(p, cfg.bc, cfg.count)
    fd = spectra.fd_oracle_eigenvalues(p, cfg.bc, cfg.dim, cfg.count)
    a = shoot.expanded()
    b = fd.expanded()
    n = min(a.size, b.size)
    max_gap = float(np.max(np.abs(a[:n] - b[:n]))) if n else 0.0
    return sm.OracleResponse(
        bc=cfg.bc,
        dim=cfg.dim,
        shooting=_eigen_models(shoot.entries),
        fd=_eigen_models(fd.entries),
        max_abs_gap=max_gap,
    )


def handle_identities(cfg: sm.IdentitiesConfig) -> sm.IdentitiesResponse:
    p = cfg.potential.build()
    samples = cfg.mu_samples if cfg.mu_samples is not None else verify.DEFAULT_MU_SAMPLES
    rows = verify.verify_identities(p, samples)
    keys = [k for k in rows[0] if k not in ("mu", "translation_mixed", "translation_dn")]
    max_residual = max(r[k] for r in rows for k in keys)
    max_translation = max(r[k] for r in rows for k in ("translation_mixed", "translation_dn"))
    return sm.IdentitiesResponse(
        rows=rows, max_residual=max_residual, max_translation_residual=max_translation
    )


def handle_trajectory(cfg: sm.TrajectoryConfig) -> sm.TrajectoryResponse:
    p = cfg.potential.build()
    traj = shooting.integrate_fundamental(p, cfg.mu, steps=cfg.steps)
    return sm.TrajectoryResponse(
        mu=traj.mu,
        steps=traj.grid.size - 1,
        wronskian_residual=shooting.wronskian_residual(traj),
        x=[float(v) for v in traj.grid],
        c=[float(np.real(v)) for v in traj.c],
        cp=[float(np.real(v)) for v in traj.cp],
        s=[float(np.real(v)) for v in traj.s],
        sp=[float(np.real(v)) for v in traj.sp],
    )


HANDLERS = {
    "spectrum": (sm.SpectrumConfig, handle_spectrum),
    "compare": (sm.CompareConfig, handle_compare),
    "verify": (sm.VerifyConfig, handle_verify),
    "kernel": (sm.KernelConfig, handle_kernel),
    "oracle": (sm.OracleConfig, handle_oracle),
    "identities": (sm.IdentitiesConfig, handle_identities),
    "trajectory": (sm.TrajectoryConfig, handle_trajectory),
}
