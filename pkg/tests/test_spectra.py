import numpy as np
import pytest

import sturmspec as ss
from sturmspec.errors import InputError, NumericsError


def rel_err(got, expected):
    return abs(got - expected) / (1.0 + abs(expected))


class TestCharValue:
    def test_dirichlet_zero_at_pi_squared(self, q_zero):
        assert abs(ss.char_value(q_zero, "D", np.pi**2)) < 1e-10

    def test_dn_zero_at_quarter(self, q_zero):
        assert abs(ss.char_value(q_zero, "DN", (np.pi / 2) ** 2)) < 1e-10

    def test_neumann_of_constant_at_c(self, q_five):
        assert abs(ss.char_value(q_five, "N", 5.0)) < 1e-10

    def test_vectorized_matches_scalar(self, q_cos2):
        mus = np.array([1.0, 10.0, 30.0])
        vec = ss.char_value(q_cos2, "D", mus)
        for m, v in zip(mus, vec):
            assert ss.char_value(q_cos2, "D", float(m)) == pytest.approx(v, abs=1e-13)

    def test_complex_potential_rejected(self):
        p = ss.Potential(np.zeros(11) + 0.1j, (0.0, 1.0))
        with pytest.raises(InputError):
            ss.char_value(p, "D", 1.0)

    def test_unknown_bc_rejected(self, q_zero):
        with pytest.raises(InputError):
            ss.char_value(q_zero, "X", 1.0)


class TestHillDiscriminant:
    def test_free_band_edges(self, q_zero):
        assert ss.hill_discriminant(q_zero, 4 * np.pi**2) == pytest.approx(2.0, abs=1e-9)
        assert ss.hill_discriminant(q_zero, np.pi**2) == pytest.approx(-2.0, abs=1e-9)

    def test_against_independent_integration(self, q_cos2):
        from scipy.integrate import solve_ivp

        def rhs(x, y):
            w = q_cos2(x)
            return [y[1], w * y[0], y[3], w * y[2]]

        sol = solve_ivp(rhs, (0, 1), [1, 0, 0, 1], method="DOP853", rtol=1e-12, atol=1e-14)
        delta_oracle = sol.y[0, -1] + sol.y[3, -1]
        assert ss.hill_discriminant(q_cos2, 0.0) == pytest.approx(delta_oracle, abs=1e-6)

    def test_factorization_identities_on_symmetric_potential(self, q_cos2):
        mus = np.array([0.0, 1.0, np.pi**2, 10.0, 4 * np.pi**2, 50.0])
        scan = ss.endpoint_scan(q_cos2, mus, steps=2000)
        delta = scan.c1 + scan.sp1
        assert np.max(np.abs(delta - 2 - 4 * scan.s_half * scan.cp_half)) < 1e-7
        assert np.max(np.abs(delta + 2 - 4 * scan.c_half * scan.sp_half)) < 1e-7


class TestFreeSpectra:
    def test_dirichlet(self, q_zero):
        ev = ss.eigenvalues(q_zero, "D", 3)
        for entry, expected in zip(ev.entries, [np.pi**2, 4 * np.pi**2, 9 * np.pi**2]):
            assert rel_err(entry.mu, expected) < 1e-8

    def test_neumann_includes_zero(self, q_zero):
        ev = ss.eigenvalues(q_zero, "N", 3)
        for entry, expected in zip(ev.entries, [0.0, np.pi**2, 4 * np.pi**2]):
            assert rel_err(entry.mu, expected) < 1e-8

    def test_periodic_multiplicities(self, q_zero):
        ev = ss.eigenvalues(q_zero, "P", 3)
        expected = [(0.0, 1), (4 * np.pi**2, 2), (16 * np.pi**2, 2)]
        for entry, (mu, mult) in zip(ev.entries, expected):
            assert rel_err(entry.mu, mu) < 1e-8
            assert entry.multiplicity == mult

    def test_antiperiodic_multiplicities(self, q_zero):
        ev = ss.eigenvalues(q_zero, "AP", 2)
        expected = [(np.pi**2, 2), (9 * np.pi**2, 2)]
        for entry, (mu, mult) in zip(ev.entries, expected):
            assert rel_err(entry.mu, mu) < 1e-8
            assert entry.multiplicity == mult

    def test_entries_strictly_increasing_with_small_residuals(self, q_zero):
        for bc in ss.BC_KINDS:
            ev = ss.eigenvalues(q_zero, bc, 4)
            mus = ev.mus()
            assert np.all(np.diff(mus) > 0)
            for e in ev.entries:
                assert e.char_residual <= 1e-8 * (1 + abs(e.mu))


class TestConstantPotential:
    def test_dirichlet_equals_neumann_except_lowest(self, q_five):
        d = ss.eigenvalues(q_five, "D", 6).mus()
        n = ss.eigenvalues(q_five, "N", 7).mus()
        assert abs(n[0] - 5.0) < 1e-7
        assert np.max(np.abs(d - n[1:]) / (1 + np.abs(d))) < 1e-7

    def test_shift_invariance_all_bcs(self, q_cos2):
        shifted = ss.Potential(q_cos2.samples + 2.0, q_cos2.interval)
        for bc in ss.BC_KINDS:
            base = ss.eigenvalues(q_cos2, bc, 3).expanded()
            moved = ss.eigenvalues(shifted, bc, 3).expanded()
            assert np.max(np.abs(moved - base - 2.0)) < 1e-8


class TestWindow:
    def test_negative_window_reaches_negative_eigenvalues(self):
        p = ss.make_potential({"kind": "const", "params": {"c": -3.0}}, nodes=16)
        ev = ss.eigenvalues(p, "N", 2)
        assert ev.entries[0].mu == pytest.approx(-3.0, abs=1e-8)

    def test_count_must_be_positive(self, q_zero):
        with pytest.raises(InputError):
            ss.eigenvalues(q_zero, "D", 0)


class TestMultiplicity:
    def test_free_periodic_double(self, q_zero):
        assert ss.multiplicity(q_zero, 4 * np.pi**2, "P") == 2

    def test_free_periodic_lowest_simple(self, q_zero):
        assert ss.multiplicity(q_zero, 0.0, "P") == 1

    def test_non_root_rejected(self, q_zero):
        with pytest.raises(InputError):
            ss.multiplicity(q_zero, 1.0, "P")

    def test_mathieu_lowest_pair_simple(self, q_cos2):
        ev = ss.eigenvalues(q_cos2, "AP", 2)
        gap = ev.entries[1].mu - ev.entries[0].mu
        assert gap > 0.5
        for e in ev.entries:
            assert ss.multiplicity(q_cos2, e.mu, "AP") == 1

    def test_matches_eigenvalue_list_multiplicity(self, q_cos4):
        ev = ss.eigenvalues(q_cos4, "AP", 3)
        for e in ev.entries:
            assert ss.multiplicity(q_cos4, e.mu, "AP") == e.multiplicity == 2


class TestClassification:
    def test_free_periodic_cases(self, q_zero):
        cls = ss.classify_periodic_roots(q_zero, 3, "P")
        assert cls.roots[0].case == "cprime-only"
        assert cls.roots[1].case == "double"
        assert cls.roots[2].case == "double"

    def test_free_antiperiodic_cases(self, q_zero):
        cls = ss.classify_periodic_roots(q_zero, 2, "AP")
        assert all(r.case == "double" for r in cls.roots)

    def test_mathieu_split_pair_tagged_by_single_factor(self, q_cos2):
        cls = ss.classify_periodic_roots(q_cos2, 3, "P")
        tags = [r.case for r in cls.roots]
        assert tags[0] == "cprime-only"
        assert sorted(tags[1:]) == ["cprime-only", "s-only"]

    def test_asymmetric_potential_rejected(self, q_linear):
        with pytest.raises(InputError):
            ss.classify_periodic_roots(q_linear, 3, "P")


class TestInterlacing:
    def test_neumann_dirichlet_interlacing(self, q_cos2, q_bump):
        # classical gate: the k-th Dirichlet eigenvalue lies between the
        # (k-1)-th and (k+1)-th Neumann eigenvalues
        for p in (q_cos2, q_bump):
            d = ss.eigenvalues(p, "D", 5).mus()
            n = ss.eigenvalues(p, "N", 7).mus()
            tol = 1e-8 * (1 + np.abs(d))
            for k in range(5):
                assert n[k] <= d[k] + tol[k]
                assert d[k] <= n[k + 2] + tol[k]

    def test_dirichlet_asymptotic_gate(self, q_cos2, q_bump):
        for p in (q_cos2, q_bump):
            d = ss.eigenvalues(p, "D", 12).mus()
            bound = abs(float(p.integral())) + 1.0
            ns = np.arange(1, 13)
            assert np.max(np.abs(d - ns**2 * np.pi**2)) <= bound


class TestFdOracle:
    def test_free_dirichlet_lowest(self, q_zero):
        ev = ss.fd_oracle_eigenvalues(q_zero, "D", 2000, 3)
        assert abs(ev.entries[0].mu - np.pi**2) < 5e-6

    def test_closed_form_fd_eigenvalue(self, q_zero):
        # FD eigenvalues of the free Dirichlet matrix are 4 sin^2(k pi h / 2) / h^2
        dim = 500
        h = 1.0 / (dim + 1)
        ev = ss.fd_oracle_eigenvalues(q_zero, "D", dim, 3)
        for k, entry in enumerate(ev.entries, start=1):
            expected = 4 * np.sin(k * np.pi * h / 2) ** 2 / h**2
            assert entry.mu == pytest.approx(expected, rel=1e-9)

    def test_constant_shift_is_exact(self, q_zero, q_five):
        base = ss.fd_oracle_eigenvalues(q_zero, "D", 500, 4).mus()
        moved = ss.fd_oracle_eigenvalues(q_five, "D", 500, 4).mus()
        assert np.max(np.abs(moved - base - 5.0)) < 1e-9

    def test_agreement_improves_4x_with_dim_doubling(self, q_cos2):
        shoot = ss.eigenvalues(q_cos2, "D", 4).mus()
        errs = []
        for dim in (500, 1000):
            fd = ss.fd_oracle_eigenvalues(q_cos2, "D", dim, 4).mus()
            errs.append(np.max(np.abs(fd - shoot)))
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.15)

    def test_periodic_pairs_cluster(self, q_zero):
        ev = ss.fd_oracle_eigenvalues(q_zero, "P", 1000, 3)
        assert [e.multiplicity for e in ev.entries] == [1, 2, 2]

    def test_antiperiodic_against_shooting(self, q_cos4):
        shoot = ss.eigenvalues(q_cos4, "AP", 3)
        fd = ss.fd_oracle_eigenvalues(q_cos4, "AP", 2000, 3)
        assert [e.multiplicity for e in fd.entries] == [2, 2, 2]
        mus = shoot.expanded()
        gap = np.abs(mus - fd.expanded())
        h = 1.0 / 2001
        assert np.all(gap <= np.maximum(1e-5, (1 + np.abs(mus)) ** 2 * h**2))

    def test_dim_floor(self, q_zero):
        with pytest.raises(InputError):
            ss.fd_oracle_eigenvalues(q_zero, "D", 40, 2)
        with pytest.raises(InputError):
            ss.fd_oracle_eigenvalues(q_zero, "D", 50, 20)


class TestAsymmetricPeriodic:
    def test_linear_potential_gaps_match_fourier_asymptotics(self, q_linear):
        # pair m couples its two free modes through the Fourier coefficient
        # at frequency 2m, so the gap width is ~ 2|c_2m| = 1/(2 pi m)
        ev = ss.eigenvalues(q_linear, "P", 5)
        mus = ev.mus()
        gap1 = mus[2] - mus[1]
        gap2 = mus[4] - mus[3]
        assert gap1 == pytest.approx(1 / (2 * np.pi), rel=0.05)
        assert gap2 == pytest.approx(1 / (4 * np.pi), rel=0.05)
        assert all(e.multiplicity == 1 for e in ev.entries)

    def test_linear_potential_vs_fd(self, q_linear):
        for bc in ("P", "AP"):
            shoot = ss.eigenvalues(q_linear, bc, 6).expanded()
            fd = ss.fd_oracle_eigenvalues(q_linear, bc, 2000, 6).expanded()
            n = min(shoot.size, fd.size)
            scale = (1 + np.abs(shoot[:n])) ** 2 * (1 / 2001) ** 2
            assert np.all(np.abs(shoot[:n] - fd[:n]) <= np.maximum(1e-5, scale))
